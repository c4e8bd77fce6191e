//! Physical parameters of one atom-cavity subsystem and the complex
//! frequencies derived from them.
//!
//! Both subsystems share the same parameters. Rates are absolute and share
//! the unit of the coupling `g`; with the default `g = 1` every rate reads
//! directly as a ratio to `g` and times are scaled times `g t`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of a lossy Jaynes-Cummings subsystem with a Kerr medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Atom-field coupling.
    pub g: f64,
    /// Detuning `ω - ν`.
    pub delta: f64,
    /// Kerr susceptibility.
    pub chi: f64,
    /// Cavity photon loss rate.
    pub kappa: f64,
    /// Atomic decay rate.
    pub gamma_a: f64,
    /// Absolute atomic transition frequency (full-Hamiltonian checks only).
    pub omega: Option<f64>,
    /// Absolute cavity frequency (full-Hamiltonian checks only).
    pub nu: Option<f64>,
}

impl SystemParams {
    pub fn new(g: f64, delta: f64, chi: f64, kappa: f64, gamma_a: f64) -> Result<Self> {
        let p = SystemParams {
            g,
            delta,
            chi,
            kappa,
            gamma_a,
            omega: None,
            nu: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in units of `g` (so `g = 1`).
    pub fn scaled(delta: f64, chi: f64, kappa: f64, gamma_a: f64) -> Result<Self> {
        Self::new(1.0, delta, chi, kappa, gamma_a)
    }

    /// Attach absolute frequencies; `omega - nu` must reproduce `delta`.
    pub fn with_frequencies(mut self, omega: f64, nu: f64) -> Result<Self> {
        self.omega = Some(omega);
        self.nu = Some(nu);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.delta, self.chi, self.kappa, self.gamma_a]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "g must be > 0, got {}",
                self.g
            )));
        }
        if self.chi < 0.0 {
            return Err(Error::InvalidParams(format!(
                "chi must be >= 0, got {}",
                self.chi
            )));
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must be >= 0, got {}",
                self.kappa
            )));
        }
        if self.gamma_a < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma must be >= 0, got {}",
                self.gamma_a
            )));
        }
        if let (Some(omega), Some(nu)) = (self.omega, self.nu) {
            let scale = 1.0 + omega.abs().max(nu.abs());
            if ((omega - nu) - self.delta).abs() > 1e-9 * scale {
                return Err(Error::InvalidParams(format!(
                    "omega - nu = {} does not match delta = {}",
                    omega - nu,
                    self.delta
                )));
            }
        }
        Ok(())
    }

    /// `κ = Γ`: the regime where the swapped dynamics is dissipation free.
    pub fn is_balanced(&self) -> bool {
        self.kappa == self.gamma_a
    }

    /// Effective detuning `Δ - 2χ` (the real part of ζ).
    pub fn kerr_detuning(&self) -> f64 {
        self.delta - 2.0 * self.chi
    }
}

/// Initial state of subsystem 1, `cosθ|e,1⟩ + sinθ e^{-iφ}|g,2⟩`.
/// Subsystem 2 always starts in `|g,2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub theta: f64,
    pub phi: f64,
}

impl InitialState {
    pub fn new(theta: f64, phi: f64) -> Self {
        InitialState { theta, phi }
    }

    /// `(cosθ, sinθ e^{-iφ})`.
    pub fn coefficients(&self) -> (Complex64, Complex64) {
        let (s, c) = exact_sin_cos(self.theta);
        (Complex64::new(c, 0.0), s * phase_factor(-self.phi))
    }
}

/// `(sin x, cos x)` that is exact at integer multiples of π/2.
///
/// Angles written as `k/2 π` lose a few ulps in radians, which would turn the
/// `cosθ = 0` special case into a 1e-17 perturbation.
pub fn exact_sin_cos(x: f64) -> (f64, f64) {
    let k = (x / FRAC_PI_2).round();
    if (x - k * FRAC_PI_2).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        match (k as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        x.sin_cos()
    }
}

/// `e^{i x}` with exact values at multiples of π/2.
pub fn phase_factor(x: f64) -> Complex64 {
    let (s, c) = exact_sin_cos(x);
    Complex64::new(c, s)
}

/// Complex frequencies shared by every closed-form expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies {
    /// λ = Δ + iκ/2 - iΓ/2
    pub lambda_c: Complex64,
    /// ζ = λ - 2χ
    pub zeta: Complex64,
    /// Ω = sqrt(-ζ² - 8g²), principal branch
    pub omega_c: Complex64,
    /// Ω₀ = sqrt((Δ - 2χ)² + 8g²)
    pub omega0: f64,
    /// The coupling `g` the frequencies were derived with.
    pub coupling: f64,
}

pub fn derive_frequencies(params: &SystemParams) -> DerivedFrequencies {
    let g = params.g;
    let lambda_c = Complex64::new(params.delta, 0.5 * (params.kappa - params.gamma_a));
    let zeta = lambda_c - 2.0 * params.chi;
    let mut omega_sq = -(zeta * zeta) - 8.0 * g * g;
    // -0.0 would put sqrt on the -i axis
    if omega_sq.im == 0.0 {
        omega_sq.im = 0.0;
    }
    let kd = params.kerr_detuning();
    DerivedFrequencies {
        lambda_c,
        zeta,
        omega_c: omega_sq.sqrt(),
        omega0: (kd * kd + 8.0 * g * g).sqrt(),
        coupling: g,
    }
}

/// Reduce an angle to the principal interval (-π, π].
pub fn principal_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y <= -PI {
        y += 2.0 * PI;
    }
    y
}
