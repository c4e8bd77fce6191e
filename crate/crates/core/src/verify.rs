//! Seeded differential suites comparing the closed forms with identities,
//! with the ODE oracle and with the full Hamiltonian.
//!
//! Every suite draws from its own ChaCha8 stream derived from the run seed,
//! so a suite's cases do not depend on which other suites ran.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conditions::maximal_times_closed_form;
use crate::evolution::{eta_pair, normalize, normalized_pair, sinh_half_over, SubsystemAmplitudes};
use crate::oracle::ode::integrate_interaction_picture_at;
use crate::oracle::subspace::{verify_subspace_invariance, with_default_frequencies};
use crate::params::{derive_frequencies, DerivedFrequencies, InitialState, SystemParams};
use crate::swap::{bsm_project, concurrence_wootters, SwapOutcome, TwoQubitDensity};
use crate::trajectory::sample_with;

pub const DEFAULT_SEED: u64 = 20_240_117;
pub const DEFAULT_DRAWS: usize = 50;
pub const ORACLE_TOL: f64 = 1e-8;
/// Tolerance handed to the ODE integrator by the oracle suite.
pub const ODE_TOL: f64 = 1e-12;
pub const ORACLE_T_MAX: f64 = 15.0;
pub const ORACLE_SAMPLES: usize = 151;

pub type EtaFn = fn(&DerivedFrequencies, f64) -> (Complex64, Complex64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Parameter draws for the oracle suite; other suites scale from it.
    pub draws: usize,
    /// Component tolerance of the oracle comparison.
    pub oracle_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            oracle_tol: ORACLE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub max_dev: f64,
    pub tol: f64,
    /// Replay information for the first case over tolerance.
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

/// Tracks the worst deviation and the first failing case.
struct Tally {
    name: &'static str,
    tol: f64,
    cases: usize,
    max_dev: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally {
            name,
            tol,
            cases: 0,
            max_dev: 0.0,
            first_failure: None,
        }
    }

    fn record(&mut self, dev: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        let bad = !(dev <= self.tol);
        self.max_dev = self
            .max_dev
            .max(if dev.is_nan() { f64::INFINITY } else { dev });
        if bad && self.first_failure.is_none() {
            self.first_failure = Some(case());
        }
    }

    fn fail(&mut self, case: String) {
        self.cases += 1;
        self.max_dev = f64::INFINITY;
        if self.first_failure.is_none() {
            self.first_failure = Some(case);
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            passed: self.first_failure.is_none(),
            cases: self.cases,
            max_dev: self.max_dev,
            tol: self.tol,
            first_failure: self.first_failure,
        }
    }
}

fn suite_rng(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Parameters over `Δ ∈ [-10, 10]`, `χ ∈ [0, 1]`, `κ, Γ ∈ [0, 3]`.
pub fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams::scaled(
        rng.random_range(-10.0..=10.0),
        rng.random_range(0.0..=1.0),
        rng.random_range(0.0..=3.0),
        rng.random_range(0.0..=3.0),
    )
    .expect("drawn parameters are valid")
}

pub fn random_init(rng: &mut ChaCha8Rng) -> InitialState {
    InitialState::new(
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
    )
}

fn describe(p: &SystemParams, init: &InitialState, t: f64) -> String {
    format!(
        "delta={:.17e} chi={:.17e} kappa={:.17e} gamma={:.17e} theta={:.17e} phi={:.17e} t={:.17e}",
        p.delta, p.chi, p.kappa, p.gamma_a, init.theta, init.phi, t
    )
}

fn component_dev(a: &SubsystemAmplitudes, b: &SubsystemAmplitudes) -> f64 {
    (a.a_e1 - b.a_e1).norm().max((a.a_g2 - b.a_g2).norm())
}

fn angle_dev(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// `η η' + 8g² (sinh(Ωt/2)/Ω)² = 1`, with the η pair supplied by `eta`.
pub fn determinant_identity_with(cfg: &VerifyConfig, eta: EtaFn) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 1);
    let mut tally = Tally::new("determinant-identity", 1e-12);
    for k in 0..cfg.draws * 20 {
        let mut p = random_params(&mut rng);
        if k % 2 == 0 {
            p.gamma_a = p.kappa;
        }
        let t = rng.random_range(0.0..=ORACLE_T_MAX);
        let df = derive_frequencies(&p);
        let (e, ep) = eta(&df, t);
        let s = sinh_half_over(df.omega_c, t);
        let sinh_term = 8.0 * p.g * p.g * s * s;
        // cosh grows with t when κ ≠ Γ, so compare relative to the terms
        let scale = if p.is_balanced() {
            1.0
        } else {
            (e * ep).norm().max(sinh_term.norm()).max(1.0)
        };
        let dev = (e * ep + sinh_term - 1.0).norm() / scale;
        tally.record(dev, || describe(&p, &InitialState::new(0.0, 0.0), t));
    }
    tally.finish()
}

pub fn determinant_identity(cfg: &VerifyConfig) -> SuiteResult {
    determinant_identity_with(cfg, eta_pair)
}

/// Observables must not depend on which square root is taken for Ω.
pub fn branch_independence(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 2);
    let mut tally = Tally::new("branch-independence", 1e-12);
    for _ in 0..cfg.draws * 20 {
        let p = random_params(&mut rng);
        let init = random_init(&mut rng);
        let t = rng.random_range(0.0..=ORACLE_T_MAX);
        let df = derive_frequencies(&p);
        let flipped = DerivedFrequencies {
            omega_c: -df.omega_c,
            ..df
        };
        match (
            normalized_pair(&df, &init, t),
            normalized_pair(&flipped, &init, t),
        ) {
            (Ok((a1, a2)), Ok((b1, b2))) => {
                let dev = component_dev(&a1, &b1).max(component_dev(&a2, &b2));
                tally.record(dev, || describe(&p, &init, t));
            }
            (Err(_), Err(_)) => tally.record(0.0, String::new),
            _ => tally.fail(describe(&p, &init, t)),
        }
    }
    tally.finish()
}

/// Normalized closed-form amplitudes against the integrated interaction
/// picture, for both subsystems.
pub fn oracle_equivalence(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 3);
    let draws: Vec<(SystemParams, InitialState)> = (0..cfg.draws)
        .map(|_| (random_params(&mut rng), random_init(&mut rng)))
        .collect();
    let times: Vec<f64> = (0..ORACLE_SAMPLES)
        .map(|k| ORACLE_T_MAX * k as f64 / (ORACLE_SAMPLES - 1) as f64)
        .collect();
    let per_draw: Vec<Vec<(f64, f64)>> = draws
        .par_iter()
        .map(|(p, init)| oracle_deviations(p, init, &times))
        .collect();
    let mut tally = Tally::new("oracle-equivalence", cfg.oracle_tol);
    for ((p, init), devs) in draws.iter().zip(per_draw) {
        for (t, dev) in devs {
            tally.record(dev, || describe(p, init, t));
        }
    }
    tally.finish()
}

/// `(t, deviation)` per sample; NaN marks a failed integration.
pub fn oracle_deviations(p: &SystemParams, init: &InitialState, times: &[f64]) -> Vec<(f64, f64)> {
    let (c0, s0) = init.coefficients();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (Ok(o1), Ok(o2)) = (
        integrate_interaction_picture_at(p, [c0, s0], times, ODE_TOL),
        integrate_interaction_picture_at(p, [zero, one], times, ODE_TOL),
    ) else {
        return vec![(times[0], f64::NAN)];
    };
    let df = derive_frequencies(p);
    times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let dev = match normalized_pair(&df, init, t) {
                Ok((a1, a2)) => {
                    let b1 = normalize(&SubsystemAmplitudes::raw(o1.states[k][0], o1.states[k][1]));
                    let b2 = normalize(&SubsystemAmplitudes::raw(o2.states[k][0], o2.states[k][1]));
                    match (b1, b2) {
                        (Ok(b1), Ok(b2)) => component_dev(&a1, &b1).max(component_dev(&a2, &b2)),
                        _ => f64::NAN,
                    }
                }
                Err(_) => f64::NAN,
            };
            (t, dev)
        })
        .collect()
}

fn random_outcome(rng: &mut ChaCha8Rng) -> Option<SwapOutcome> {
    let mut z = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let s1 = normalize(&SubsystemAmplitudes::raw(z(), z())).ok()?;
    let s2 = normalize(&SubsystemAmplitudes::raw(z(), z())).ok()?;
    let out = bsm_project(&s1, &s2);
    (!out.degenerate).then_some(out)
}

/// Closed-form concurrence against the general mixed-state formula.
pub fn concurrence_consistency(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 4);
    let mut tally = Tally::new("concurrence-consistency", 1e-10);
    for k in 0..cfg.draws * 200 {
        let Some(out) = random_outcome(&mut rng) else {
            continue;
        };
        match TwoQubitDensity::from_outcome(&out) {
            Ok(rho) => {
                let dev = (concurrence_wootters(&rho) - out.concurrence).abs();
                tally.record(dev, || {
                    format!("draw={k} amp_eg={} amp_ge={}", out.amp_eg, out.amp_ge)
                });
            }
            Err(e) => tally.fail(format!("draw={k}: {e}")),
        }
    }
    tally.finish()
}

/// `θ = π/2` and `3π/2`: maximal entanglement with Θ = 0 at every `t > 0`,
/// degenerate at `t = 0`.
pub fn theta_half_pi(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 5);
    let mut tally = Tally::new("theta-half-pi", 1e-10);
    for k in 0..20 {
        let p = random_params(&mut rng);
        let theta = if k % 2 == 0 {
            FRAC_PI_2
        } else {
            3.0 * FRAC_PI_2
        };
        let init = InitialState::new(theta, rng.random_range(0.0..2.0 * PI));
        let df = derive_frequencies(&p);
        match sample_with(&df, &init, 0.0) {
            Ok(s) if s.outcome.degenerate => tally.record(0.0, String::new),
            _ => tally.fail(describe(&p, &init, 0.0)),
        }
        for _ in 0..100 {
            let t = rng.random_range(1e-6..=ORACLE_T_MAX);
            let dev = match sample_with(&df, &init, t) {
                Ok(s) => {
                    let o = s.outcome;
                    let phase = o.phase().map_or(f64::INFINITY, |x| angle_dev(x, 0.0));
                    (1.0 - o.concurrence)
                        .abs()
                        .max((o.p1 - 0.5).abs())
                        .max((o.p2 - 0.5).abs())
                        .max(phase)
                }
                Err(_) => f64::INFINITY,
            };
            tally.record(dev, || describe(&p, &init, t));
        }
    }
    tally.finish()
}

/// `κ = Γ = c` reproduces the loss-free observables.
pub fn ideal_system(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 6);
    let mut tally = Tally::new("ideal-system", 1e-10);
    for _ in 0..cfg.draws * 4 {
        let base = random_params(&mut rng);
        let init = random_init(&mut rng);
        let t = rng.random_range(0.0..=ORACLE_T_MAX);
        let ideal = SystemParams::scaled(base.delta, base.chi, 0.0, 0.0).expect("valid");
        let reference = sample_with(&derive_frequencies(&ideal), &init, t);
        for c in [0.5, 2.0] {
            let lossy = SystemParams::scaled(base.delta, base.chi, c, c).expect("valid");
            let got = sample_with(&derive_frequencies(&lossy), &init, t);
            let dev = match (&reference, &got) {
                (Ok(a), Ok(b)) => observables_dev(&a.outcome, &b.outcome),
                (Err(_), Err(_)) => 0.0,
                _ => f64::INFINITY,
            };
            tally.record(dev, || describe(&lossy, &init, t));
        }
    }
    tally.finish()
}

fn observables_dev(a: &SwapOutcome, b: &SwapOutcome) -> f64 {
    if a.degenerate || b.degenerate {
        return if a.degenerate == b.degenerate {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let phase = match (a.phase(), b.phase()) {
        (Some(x), Some(y)) => angle_dev(x, y),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    (a.concurrence - b.concurrence)
        .abs()
        .max((a.p1 - b.p1).abs())
        .max((a.p2 - b.p2).abs())
        .max(phase)
}

/// Initial states for which the closed-form times give `C = 1` at `κ = Γ`:
/// `Δ = 2χ` with `φ ∈ {0, π}`, or `θ ∈ {0, π}`.
pub fn maximality_law(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 7);
    let mut tally = Tally::new("maximality-law", 1e-8);
    for k in 0..cfg.draws {
        let c = rng.random_range(0.0..=3.0);
        let (p, init) = match k % 3 {
            0 => {
                let chi = rng.random_range(0.0..=1.0);
                let phi = if rng.random_bool(0.5) { 0.0 } else { PI };
                (
                    SystemParams::scaled(2.0 * chi, chi, c, c).expect("valid"),
                    InitialState::new(rng.random_range(0.0..2.0 * PI), phi),
                )
            }
            1 => {
                // keep (Δ - 2χ)² < 8 so the closed form applies
                let chi = rng.random_range(0.0..=1.0);
                let delta = 2.0 * chi + rng.random_range(-2.8..=2.8);
                let theta = if rng.random_bool(0.5) { 0.0 } else { PI };
                (
                    SystemParams::scaled(delta, chi, c, c).expect("valid"),
                    InitialState::new(theta, rng.random_range(0.0..2.0 * PI)),
                )
            }
            _ => (
                SystemParams::scaled(0.0, 0.0, c, c).expect("valid"),
                InitialState::new(FRAC_PI_4, 0.0),
            ),
        };
        let report = match maximal_times_closed_form(&p, 5) {
            Ok(r) => r,
            Err(e) => {
                tally.fail(format!("{}: {e}", describe(&p, &init, 0.0)));
                continue;
            }
        };
        let df = derive_frequencies(&p);
        for (&t, &resid) in report.times.iter().zip(&report.residuals) {
            let dev = match sample_with(&df, &init, t) {
                Ok(s) => (1.0 - s.outcome.concurrence)
                    .max((s.outcome.p1 - 0.5).abs())
                    .max((s.outcome.p2 - 0.5).abs())
                    .max(resid),
                Err(_) => f64::INFINITY,
            };
            tally.record(dev, || describe(&p, &init, t));
        }
    }
    tally.finish()
}

/// Population leakage and picture equivalence against the full Hamiltonian.
pub fn subspace_invariance(cfg: &VerifyConfig) -> SuiteResult {
    let mut rng = suite_rng(cfg.seed, 8);
    let draws: Vec<SystemParams> = (0..cfg.draws.clamp(1, 5))
        .map(|_| random_params(&mut rng))
        .collect();
    let results: Vec<_> = draws
        .par_iter()
        .map(|p| {
            let full = with_default_frequencies(p)?;
            verify_subspace_invariance(&full, 8, ORACLE_T_MAX, 31, 1e-10)
        })
        .collect();
    let mut tally = Tally::new("subspace-invariance", 1e-10);
    for (p, r) in draws.iter().zip(results) {
        match r {
            Ok(rep) => tally.record(rep.max_leak, || {
                describe(p, &InitialState::new(0.0, 0.0), 0.0)
            }),
            Err(e) => tally.fail(format!(
                "{}: {e}",
                describe(p, &InitialState::new(0.0, 0.0), 0.0)
            )),
        }
    }
    tally.finish()
}

pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    let suites = vec![
        determinant_identity(cfg),
        branch_independence(cfg),
        oracle_equivalence(cfg),
        concurrence_consistency(cfg),
        theta_half_pi(cfg),
        ideal_system(cfg),
        maximality_law(cfg),
        subspace_invariance(cfg),
    ];
    VerifyReport {
        config: *cfg,
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            draws: 4,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn quick_run_passes() {
        let report = run_all(&small());
        for s in &report.suites {
            assert!(s.passed, "{s:?}");
            assert!(s.cases > 0, "{}", s.name);
        }
        assert!(report.all_passed());
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = small();
        assert_eq!(
            format!("{:?}", oracle_equivalence(&cfg)),
            format!("{:?}", oracle_equivalence(&cfg))
        );
    }

    #[test]
    fn flipped_sign_in_eta_prime_is_caught() {
        fn mutant(df: &DerivedFrequencies, t: f64) -> (Complex64, Complex64) {
            let (e, _) = eta_pair(df, t);
            (e, e)
        }
        let r = determinant_identity_with(&small(), mutant);
        assert!(!r.passed);
        assert!(r.first_failure.is_some());
    }
}
