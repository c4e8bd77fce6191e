//! Full-Hamiltonian evolution of `|e,1⟩` and `|g,2⟩`: leakage out of the
//! two-photon sector and agreement with the interaction-picture oracle.
//!
//! The transform to the interaction picture multiplies each sector amplitude
//! by `e^{i E_k t}` with `E_k` the complete diagonal entry of the Hamiltonian
//! (free, Kerr and loss terms). The energy difference of the two sector
//! states is then exactly ζ, which is the phase driving the oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::expm::expm;
use crate::oracle::fock::{build_full_hamiltonian, Atom, FockOperators};
use crate::oracle::ode::integrate_interaction_picture_at;
use crate::params::SystemParams;

/// Cavity frequency used when none is given; ω follows as `ν + Δ`.
pub const DEFAULT_NU: f64 = 20.0;
pub const DEFAULT_FOCK_CUTOFF: usize = 8;
/// Allowed deviation between the transformed trajectory and the oracle.
pub const PICTURE_TOL: f64 = 1e-8;

pub fn with_default_frequencies(params: &SystemParams) -> Result<SystemParams> {
    match (params.omega, params.nu) {
        (Some(_), Some(_)) => Ok(*params),
        _ => params.with_frequencies(DEFAULT_NU + params.delta, DEFAULT_NU),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceReport {
    pub n_max: usize,
    pub samples: usize,
    /// Largest population outside the sector, relative to the total.
    pub max_leak: f64,
    pub worst_state: String,
    /// Largest component deviation from the oracle after normalization.
    pub max_picture_deviation: f64,
    /// Smallest `|⟨ψ_oracle|ψ_transformed⟩|` over all samples.
    pub min_overlap: f64,
}

fn normalized(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

pub fn verify_subspace_invariance(
    params: &SystemParams,
    n_max: usize,
    t_max: f64,
    samples: usize,
    tol: f64,
) -> Result<SubspaceReport> {
    if samples < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need t_max > 0 and at least 2 samples (got {t_max}, {samples})"
        )));
    }
    let h = build_full_hamiltonian(params, n_max)?;
    let ops = FockOperators::new(n_max)?;
    let sector = [ops.index(Atom::Excited, 1), ops.index(Atom::Ground, 2)];
    let energies = [h[(sector[0], sector[0])], h[(sector[1], sector[1])]];
    let times: Vec<f64> = (0..samples)
        .map(|k| t_max * k as f64 / (samples - 1) as f64)
        .collect();
    let starts = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let oracle = starts
        .iter()
        .map(|&s| integrate_interaction_picture_at(params, s, &times, 1e-12))
        .collect::<Result<Vec<_>>>()?;

    let mut report = SubspaceReport {
        n_max,
        samples,
        max_leak: 0.0,
        worst_state: String::new(),
        max_picture_deviation: 0.0,
        min_overlap: 1.0,
    };
    let minus_i = Complex64::new(0.0, -1.0);
    for (k, &t) in times.iter().enumerate() {
        let u: DMatrix<Complex64> = expm(&(&h * (minus_i * t)))?;
        for (j, &start) in sector.iter().enumerate() {
            let psi = u.column(start);
            let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let (mut leak, mut worst, mut worst_mag) = (0.0, start, -1.0);
            for (i, z) in psi.iter().enumerate() {
                if sector.contains(&i) {
                    continue;
                }
                leak += z.norm_sqr();
                if z.norm_sqr() > worst_mag {
                    worst_mag = z.norm_sqr();
                    worst = i;
                }
            }
            let rel = leak / total;
            if rel > report.max_leak || report.worst_state.is_empty() {
                report.max_leak = report.max_leak.max(rel);
                report.worst_state = ops.label(worst);
            }
            if rel > tol {
                return Err(Error::LeakDetected {
                    state: ops.label(worst),
                    magnitude: rel,
                });
            }
            let transformed = normalized([
                psi[sector[0]] * (Complex64::i() * energies[0] * t).exp(),
                psi[sector[1]] * (Complex64::i() * energies[1] * t).exp(),
            ]);
            let reference = normalized(oracle[j].states[k]);
            let dev = (0..2)
                .map(|c| (transformed[c] - reference[c]).norm())
                .fold(0.0, f64::max);
            let overlap = (reference[0].conj() * transformed[0]
                + reference[1].conj() * transformed[1])
                .norm();
            report.max_picture_deviation = report.max_picture_deviation.max(dev);
            report.min_overlap = report.min_overlap.min(overlap);
        }
    }
    if report.max_picture_deviation > PICTURE_TOL {
        return Err(Error::PictureMismatch {
            deviation: report.max_picture_deviation,
        });
    }
    Ok(report)
}
