//! Bell-state measurement on the two cavity fields and the atom-atom state
//! it leaves behind.
//!
//! Projecting onto `|Ψ⁻⟩_F = (|1,2⟩ - |2,1⟩)/√2` maps the product state
//! `(A₁|e,1⟩ + A₂|g,2⟩) ⊗ (A₃|e,1⟩ + A₄|g,2⟩)` to
//! `(A₁A₄|e,g⟩ - A₂A₃|g,e⟩)/√2` on the atoms.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{SubsystemAmplitudes, EPS_NORM};

/// Atom-atom state after the swap.
///
/// Observables that are undefined are `NaN`: everything except `n_t` when
/// `degenerate`, and `theta_phase` whenever one of the four amplitudes
/// vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapOutcome {
    pub amp_eg: Complex64,
    pub amp_ge: Complex64,
    pub n_t: f64,
    pub concurrence: f64,
    pub p1: f64,
    pub p2: f64,
    pub theta_phase: f64,
    pub degenerate: bool,
}

impl SwapOutcome {
    pub fn phase(&self) -> Option<f64> {
        (!self.theta_phase.is_nan()).then_some(self.theta_phase)
    }
}

struct Products {
    a14: Complex64,
    a23: Complex64,
    n_t: f64,
}

fn products(s1: &SubsystemAmplitudes, s2: &SubsystemAmplitudes) -> Products {
    debug_assert!(
        s1.normalized && s2.normalized,
        "swap needs normalized amplitudes"
    );
    let a14 = s1.a_e1 * s2.a_g2;
    let a23 = s1.a_g2 * s2.a_e1;
    Products {
        a14,
        a23,
        n_t: 0.5 * (a14.norm_sqr() + a23.norm_sqr()),
    }
}

fn moduli(s1: &SubsystemAmplitudes, s2: &SubsystemAmplitudes) -> [f64; 4] {
    [
        s1.a_e1.norm(),
        s1.a_g2.norm(),
        s2.a_e1.norm(),
        s2.a_g2.norm(),
    ]
}

pub fn bsm_project(s1: &SubsystemAmplitudes, s2: &SubsystemAmplitudes) -> SwapOutcome {
    let Products { a14, a23, n_t } = products(s1, s2);
    let u = a14 * std::f64::consts::FRAC_1_SQRT_2;
    let v = -a23 * std::f64::consts::FRAC_1_SQRT_2;
    if !(n_t > EPS_NORM) {
        return SwapOutcome {
            amp_eg: u,
            amp_ge: v,
            n_t,
            concurrence: f64::NAN,
            p1: f64::NAN,
            p2: f64::NAN,
            theta_phase: f64::NAN,
            degenerate: true,
        };
    }
    let inv = 1.0 / n_t.sqrt();
    let [m1, m2, m3, m4] = moduli(s1, s2);
    SwapOutcome {
        amp_eg: u * inv,
        amp_ge: v * inv,
        n_t,
        concurrence: (m1 * m2 * m3 * m4 / n_t).min(1.0),
        p1: a14.norm_sqr() / (2.0 * n_t),
        p2: a23.norm_sqr() / (2.0 * n_t),
        theta_phase: bell_phase(s1, s2).unwrap_or(f64::NAN),
        degenerate: false,
    }
}

/// `|A₁||A₂||A₃||A₄| / N(t)`.
pub fn concurrence_closed_form(s1: &SubsystemAmplitudes, s2: &SubsystemAmplitudes) -> Result<f64> {
    let n_t = products(s1, s2).n_t;
    if !(n_t > EPS_NORM) {
        return Err(Error::DegenerateOutcome { n_t });
    }
    let [m1, m2, m3, m4] = moduli(s1, s2);
    Ok((m1 * m2 * m3 * m4 / n_t).min(1.0))
}

/// Populations `(P₁, P₂)` of `|e,g⟩` and `|g,e⟩`.
pub fn occupation_probabilities(
    s1: &SubsystemAmplitudes,
    s2: &SubsystemAmplitudes,
) -> Result<(f64, f64)> {
    let Products { a14, a23, n_t } = products(s1, s2);
    if !(n_t > EPS_NORM) {
        return Err(Error::DegenerateOutcome { n_t });
    }
    Ok((a14.norm_sqr() / (2.0 * n_t), a23.norm_sqr() / (2.0 * n_t)))
}

/// Θ = φ₁₄ - φ₂₃ with `A_i = |A_i| e^{-iφ_i}`, in (-π, π].
pub fn bell_phase(s1: &SubsystemAmplitudes, s2: &SubsystemAmplitudes) -> Result<f64> {
    let mods = moduli(s1, s2);
    if let Some(i) = mods.iter().position(|&m| !(m > EPS_NORM)) {
        return Err(Error::UndefinedPhase { index: i + 1 });
    }
    // φ₁ + φ₄ - φ₂ - φ₃ = arg(A₂ A₃ conj(A₁ A₄))
    let z = s1.a_g2 * s2.a_e1 * (s1.a_e1 * s2.a_g2).conj();
    let theta = z.im.atan2(z.re);
    Ok(if theta <= -PI { PI } else { theta })
}

/// Which Bell state (if any) a swap outcome realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BellClass {
    PsiMinus,
    PsiPlus,
    MaxEntangledOther(f64),
    NotMaximal,
}

/// Classify an outcome. Degenerate outcomes report `NotMaximal`.
pub fn classify_bell(outcome: &SwapOutcome, tol: f64) -> BellClass {
    if outcome.degenerate || !((1.0 - outcome.concurrence).abs() <= tol) {
        return BellClass::NotMaximal;
    }
    let theta = outcome.theta_phase;
    let dist = |target: f64| {
        let d = (theta - target).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    if dist(0.0) <= tol {
        BellClass::PsiMinus
    } else if dist(PI) <= tol {
        BellClass::PsiPlus
    } else {
        BellClass::MaxEntangledOther(theta)
    }
}

/// Two-qubit density matrix on `{|e,e⟩, |e,g⟩, |g,e⟩, |g,g⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: Matrix4<Complex64>,
}

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

impl TwoQubitDensity {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        if !rho.iter().all(|z| z.is_finite()) {
            return Err(Error::NonPhysicalDensity("non-finite entry".into()));
        }
        let herm = (rho - rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "not Hermitian ({herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::NonPhysicalDensity(format!("trace {tr}")));
        }
        let hermitian = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(TwoQubitDensity { rho })
    }

    /// `|ψ⟩⟨ψ|` for a normalized pure state.
    pub fn from_pure(psi: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(psi);
        Self::new(v * v.adjoint())
    }

    /// The normalized atom-atom state of a non-degenerate swap outcome.
    pub fn from_outcome(outcome: &SwapOutcome) -> Result<Self> {
        if outcome.degenerate {
            return Err(Error::DegenerateOutcome { n_t: outcome.n_t });
        }
        let zero = Complex64::new(0.0, 0.0);
        Self::from_pure([zero, outcome.amp_eg, outcome.amp_ge, zero])
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }
}

/// Spin-flip operator `σʸ ⊗ σʸ` in the `{ee, eg, ge, gg}` basis.
fn sigma_yy() -> Matrix4<Complex64> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let z = r(0.0);
    Matrix4::new(
        z,
        z,
        z,
        r(-1.0), //
        z,
        z,
        r(1.0),
        z, //
        z,
        r(1.0),
        z,
        z, //
        r(-1.0),
        z,
        z,
        z,
    )
}

/// Wootters concurrence from the spectrum of `ρ (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
pub fn concurrence_wootters(rho: &TwoQubitDensity) -> f64 {
    let yy = sigma_yy();
    let rho = &rho.rho;
    let product = rho * (yy * rho.conjugate() * yy);
    let scale = product
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // complex Schur form is upper triangular: the diagonal is the spectrum
    let (_, tri) = nalgebra::Schur::new(product).unpack();
    let mut lambdas: Vec<f64> = tri.diagonal().iter().map(|z| z.re).collect();
    // rounding floor of a 4x4 eigensolve; clears the rank deficiency of pure states
    let floor = 64.0 * f64::EPSILON * scale;
    for l in lambdas.iter_mut() {
        if *l < floor {
            *l = 0.0;
        }
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let s: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn norm_amps(a: Complex64, b: Complex64) -> SubsystemAmplitudes {
        crate::evolution::normalize(&SubsystemAmplitudes::raw(a, b)).unwrap()
    }

    #[test]
    fn initial_state_is_separable() {
        let theta = FRAC_PI_3;
        let s1 = norm_amps(
            c(theta.cos(), 0.0),
            Complex64::from_polar(theta.sin(), -0.4),
        );
        let s2 = norm_amps(c(0.0, 0.0), c(1.0, 0.0));
        let out = bsm_project(&s1, &s2);
        assert!(!out.degenerate);
        assert_eq!(out.concurrence, 0.0);
        assert!((out.p1 - 1.0).abs() < 1e-15 && out.p2.abs() < 1e-15);
        assert!(out.theta_phase.is_nan());
        assert!((out.amp_eg.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn both_in_g2_is_degenerate() {
        let s = norm_amps(c(0.0, 0.0), c(1.0, 0.0));
        let out = bsm_project(&s, &s);
        assert!(out.degenerate);
        assert!(out.concurrence.is_nan());
        assert!(matches!(
            concurrence_closed_form(&s, &s),
            Err(Error::DegenerateOutcome { .. })
        ));
        assert!(occupation_probabilities(&s, &s).is_err());
    }

    #[test]
    fn equal_moduli_give_unit_concurrence() {
        let s1 = norm_amps(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0));
        let s2 = norm_amps(c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0));
        let out = bsm_project(&s1, &s2);
        assert!((out.amp_eg.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amp_ge.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.concurrence - 1.0).abs() < 1e-15);
        assert!((concurrence_closed_form(&s1, &s2).unwrap() - 1.0).abs() < 1e-15);
        let rho = TwoQubitDensity::from_outcome(&out).unwrap();
        assert!((concurrence_wootters(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_a3_gives_zero() {
        let s1 = norm_amps(c(0.6, 0.0), c(0.0, 0.8));
        let s2 = norm_amps(c(0.0, 0.0), c(0.0, 1.0));
        assert_eq!(concurrence_closed_form(&s1, &s2).unwrap(), 0.0);
        assert!(matches!(
            bell_phase(&s1, &s2),
            Err(Error::UndefinedPhase { index: 3 })
        ));
    }

    #[test]
    fn wootters_reference_states() {
        let quarter = Matrix4::identity() * c(0.25, 0.0);
        assert!(concurrence_wootters(&TwoQubitDensity::new(quarter).unwrap()).abs() < 1e-14);

        let h = FRAC_1_SQRT_2;
        let psi_minus = [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)];
        let rho = TwoQubitDensity::from_pure(psi_minus).unwrap();
        assert!((concurrence_wootters(&rho) - 1.0).abs() < 1e-12);

        let product = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(
            concurrence_wootters(&TwoQubitDensity::from_pure(product).unwrap()),
            0.0
        );
    }

    #[test]
    fn wootters_werner_state() {
        // p|Ψ⁻⟩⟨Ψ⁻| + (1-p) I/4 has C = max(0, (3p-1)/2)
        let h = FRAC_1_SQRT_2;
        let v = nalgebra::Vector4::new(c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0));
        let bell = v * v.adjoint();
        for &p in &[0.2, 1.0 / 3.0, 0.5, 0.8] {
            let rho = bell * c(p, 0.0) + Matrix4::identity() * c((1.0 - p) / 4.0, 0.0);
            let got = concurrence_wootters(&TwoQubitDensity::new(rho).unwrap());
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((got - want).abs() < 1e-12, "p={p}: {got} vs {want}");
        }
    }

    #[test]
    fn density_validation() {
        let mut m = Matrix4::identity() * c(0.25, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(TwoQubitDensity::new(m).is_err());
        let m = Matrix4::identity() * c(0.3, 0.0);
        assert!(TwoQubitDensity::new(m).is_err());
        let mut m = Matrix4::zeros();
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(
            TwoQubitDensity::new(m),
            Err(Error::NonPhysicalDensity(_))
        ));
    }

    #[test]
    fn classification() {
        let base = SwapOutcome {
            amp_eg: c(FRAC_1_SQRT_2, 0.0),
            amp_ge: c(-FRAC_1_SQRT_2, 0.0),
            n_t: 0.5,
            concurrence: 1.0,
            p1: 0.5,
            p2: 0.5,
            theta_phase: 0.0,
            degenerate: false,
        };
        assert_eq!(classify_bell(&base, 1e-9), BellClass::PsiMinus);
        let plus = SwapOutcome {
            theta_phase: PI,
            ..base
        };
        assert_eq!(classify_bell(&plus, 1e-9), BellClass::PsiPlus);
        let near_minus_pi = SwapOutcome {
            theta_phase: -PI + 1e-12,
            ..base
        };
        assert_eq!(classify_bell(&near_minus_pi, 1e-9), BellClass::PsiPlus);
        let other = SwapOutcome {
            theta_phase: 1.0,
            ..base
        };
        assert_eq!(
            classify_bell(&other, 1e-9),
            BellClass::MaxEntangledOther(1.0)
        );
        let weak = SwapOutcome {
            concurrence: 0.6,
            ..base
        };
        assert_eq!(classify_bell(&weak, 1e-9), BellClass::NotMaximal);
    }

    #[test]
    fn phase_is_principal() {
        // A₂A₃ conj(A₁A₄) = -1 exactly: Θ = π, never -π
        let s1 = norm_amps(c(1.0, 0.0), c(1.0, 0.0));
        let s2 = norm_amps(c(-1.0, -0.0), c(1.0, 0.0));
        assert_eq!(bell_phase(&s1, &s2).unwrap(), PI);
    }
}
