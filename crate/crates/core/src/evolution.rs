//! Closed-form evolution of the two atom-field subsystems on the
//! two-photon sector `{|e,1⟩, |g,2⟩}`.
//!
//! Every expression is written through `cosh(Ωt/2)` and `sinh(Ωt/2)/Ω`, both
//! even in Ω, so the square-root branch chosen for Ω never reaches an
//! observable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{derive_frequencies, DerivedFrequencies, InitialState, SystemParams};

/// Norms at or below this are treated as the zero vector.
pub const EPS_NORM: f64 = 1e-150;

/// Below this `|Ω t|` the power series replaces `sinh(Ωt/2)/Ω`.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Amplitudes of one subsystem on `|e,1⟩` and `|g,2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsystemAmplitudes {
    pub a_e1: Complex64,
    pub a_g2: Complex64,
    /// `true` for the normalized (A) form, `false` for the raw (C) form.
    pub normalized: bool,
}

impl SubsystemAmplitudes {
    pub fn raw(a_e1: Complex64, a_g2: Complex64) -> Self {
        SubsystemAmplitudes {
            a_e1,
            a_g2,
            normalized: false,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a_e1.norm_sqr() + self.a_g2.norm_sqr()
    }

    /// Multiply both amplitudes by a common factor; the result is raw.
    pub fn scaled_by(&self, factor: Complex64) -> Self {
        SubsystemAmplitudes::raw(self.a_e1 * factor, self.a_g2 * factor)
    }
}

/// `sinh(Ωt/2) / Ω`, continuous through `Ω = 0` where it tends to `t/2`.
pub fn sinh_half_over(omega: Complex64, t: f64) -> Complex64 {
    if (omega * t).norm() < SERIES_THRESHOLD {
        sinh_half_series(omega, t)
    } else {
        (omega * (0.5 * t)).sinh() / omega
    }
}

/// Series form `t/2 · Σ (Ωt/2)^{2k} / (2k+1)!`.
pub fn sinh_half_series(omega: Complex64, t: f64) -> Complex64 {
    let z = omega * (0.5 * t);
    let z2 = z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=6 {
        let k = k as f64;
        term = term * z2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
    }
    sum * (0.5 * t)
}

/// `(η(t), η'(t))`; the two differ only in the sign of the sinh term.
pub fn eta_pair(df: &DerivedFrequencies, t: f64) -> (Complex64, Complex64) {
    let c = (df.omega_c * (0.5 * t)).cosh();
    let s = sinh_half_over(df.omega_c, t);
    let k = I * df.zeta * s;
    (c - k, c + k)
}

/// The coupling term `(2√2 g / Ω) sinh(Ωt/2)`.
fn coupling_term(df: &DerivedFrequencies, t: f64) -> Complex64 {
    2.0 * std::f64::consts::SQRT_2 * df.coupling * sinh_half_over(df.omega_c, t)
}

fn rotating_phases(df: &DerivedFrequencies, t: f64) -> (Complex64, Complex64) {
    let half = I * df.zeta * (0.5 * t);
    (half.exp(), (-half).exp())
}

/// Raw amplitudes `(C₁, C₂)` of subsystem 1 from precomputed frequencies.
pub fn subsystem1_from(
    df: &DerivedFrequencies,
    init: &InitialState,
    t: f64,
) -> SubsystemAmplitudes {
    let (cos_t, sin_phase) = init.coefficients();
    let (eta, eta_p) = eta_pair(df, t);
    let q = coupling_term(df, t);
    let (up, down) = rotating_phases(df, t);
    SubsystemAmplitudes::raw(
        (eta * cos_t - I * q * sin_phase) * up,
        (eta_p * sin_phase - I * q * cos_t) * down,
    )
}

/// Raw amplitudes `(C₃, C₄)` of subsystem 2, which starts in `|g,2⟩`.
pub fn subsystem2_from(df: &DerivedFrequencies, t: f64) -> SubsystemAmplitudes {
    let (_, eta_p) = eta_pair(df, t);
    let q = coupling_term(df, t);
    let (up, down) = rotating_phases(df, t);
    SubsystemAmplitudes::raw(-I * q * up, eta_p * down)
}

pub fn amplitudes_subsystem1(
    params: &SystemParams,
    init: &InitialState,
    t: f64,
) -> SubsystemAmplitudes {
    subsystem1_from(&derive_frequencies(params), init, t)
}

pub fn amplitudes_subsystem2(params: &SystemParams, t: f64) -> SubsystemAmplitudes {
    subsystem2_from(&derive_frequencies(params), t)
}

/// Rescale to unit norm, preserving phases.
pub fn normalize(amps: &SubsystemAmplitudes) -> Result<SubsystemAmplitudes> {
    let n2 = amps.norm_sqr();
    if !(n2 > EPS_NORM) {
        return Err(Error::DegenerateNorm { norm_sqr: n2 });
    }
    if amps.normalized {
        return Ok(*amps);
    }
    let inv = 1.0 / n2.sqrt();
    Ok(SubsystemAmplitudes {
        a_e1: amps.a_e1 * inv,
        a_g2: amps.a_g2 * inv,
        normalized: true,
    })
}

/// Normalized `(A₁, A₂)` and `(A₃, A₄)` at time `t`.
pub fn normalized_pair(
    df: &DerivedFrequencies,
    init: &InitialState,
    t: f64,
) -> Result<(SubsystemAmplitudes, SubsystemAmplitudes)> {
    Ok((
        normalize(&subsystem1_from(df, init, t))?,
        normalize(&subsystem2_from(df, t))?,
    ))
}
