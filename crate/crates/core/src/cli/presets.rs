//! Parameter sets of the figure panels. Rates are in units of `g`; the
//! balanced panels use `κ = Γ = 0`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Panel {
    /// Time evolution of the swap observables.
    Evolve {
        delta: f64,
        chi: f64,
        kappa: f64,
        gamma: f64,
        theta: &'static str,
        phi: &'static str,
    },
    /// Θ over θ at the first scan time, one curve per `(Δ, χ)`.
    ThetaScan {
        phi: &'static str,
        curves: &'static [(f64, f64)],
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub id: &'static str,
    pub panel: Panel,
}

const fn evolve(
    id: &'static str,
    theta: &'static str,
    phi: &'static str,
    delta: f64,
    chi: f64,
    kappa: f64,
    gamma: f64,
) -> Preset {
    Preset {
        id,
        panel: Panel::Evolve {
            delta,
            chi,
            kappa,
            gamma,
            theta,
            phi,
        },
    }
}

const Q: &str = "pi/4";
const T: &str = "1/3 pi";
const P5: &str = "3pi/2";

pub const PRESETS: &[Preset] = &[
    evolve("fig2", "pi/2", "0", 10.0, 0.4, 2.0, 3.0),
    Preset {
        id: "fig3",
        panel: Panel::ThetaScan {
            phi: "pi/2",
            curves: &[(0.0, 0.0), (0.0, 0.4), (7.0, 0.0), (7.0, 0.4)],
        },
    },
    evolve("fig4a", Q, "0", 0.0, 0.0, 0.0, 0.0),
    evolve("fig4b", Q, "0", 10.0, 0.0, 0.0, 0.0),
    evolve("fig4c", Q, "0", 10.0, 0.4, 0.0, 0.0),
    evolve("fig4d", Q, "0", 0.0, 0.4, 0.0, 0.0),
    evolve("fig4e", Q, "0", 0.0, 1.0, 0.0, 0.0),
    evolve("fig4f", Q, "0", 10.0, 0.0, 0.1, 0.3),
    evolve("fig4g", Q, "0", 10.0, 0.4, 2.0, 3.0),
    evolve("fig5a", T, P5, 0.0, 0.0, 0.0, 0.0),
    evolve("fig5b", T, P5, 10.0, 0.0, 0.0, 0.0),
    evolve("fig5c", T, P5, 7.0, 0.7, 0.0, 0.0),
    evolve("fig5d", T, P5, 0.0, 0.7, 0.0, 0.0),
    evolve("fig5e", T, P5, 7.0, 0.0, 0.1, 0.3),
    evolve("fig5f", T, P5, 7.0, 0.7, 2.0, 3.0),
    evolve("fig6a", Q, "0", 10.0, 0.0, 0.1, 0.3),
    evolve("fig6b", Q, "0", 10.0, 0.4, 2.0, 3.0),
    evolve("fig6c", T, P5, 7.0, 0.0, 0.1, 0.3),
    evolve("fig6d", T, P5, 7.0, 0.7, 2.0, 3.0),
];

pub fn find(id: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id)
}

pub fn ids() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.id).collect()
}

impl Preset {
    /// One-line parameter summary written into the CSV header.
    pub fn describe(&self) -> String {
        match self.panel {
            Panel::Evolve {
                delta,
                chi,
                kappa,
                gamma,
                theta,
                phi,
            } => format!(
                "{}: theta = {theta}, phi = {phi}, delta/g = {delta}, chi/g = {chi}, kappa/g = {kappa}, gamma/g = {gamma}",
                self.id
            ),
            Panel::ThetaScan { phi, curves } => {
                let list: Vec<String> = curves
                    .iter()
                    .map(|(d, c)| format!("(delta/g = {d}, chi/g = {c})"))
                    .collect();
                format!("{}: phi = {phi}, kappa = gamma, curves {}", self.id, list.join(" "))
            }
        }
    }
}
