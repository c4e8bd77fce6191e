//! When does the swapped atom-atom state become maximally entangled?
//!
//! For `κ = Γ` the times `T_n` follow in closed form from
//! `|η(t)|⁴ - (64g⁴/Ω₀⁴) sinh⁴(Ω₀t/2) = 0`. Elsewhere, and as an
//! independent check, the maxima are located numerically from the
//! trajectory `P₁(t) - 1/2`, which changes sign exactly where the
//! concurrence reaches 1.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{eta_pair, sinh_half_over};
use crate::params::{
    derive_frequencies, exact_sin_cos, DerivedFrequencies, InitialState, SystemParams,
};
use crate::trajectory::sample_with;

/// Concurrence threshold for a numerically located maximum.
pub const MAXIMUM_THRESHOLD: f64 = 1e-6;
/// Scan density of the numeric search, per period `2π/Ω₀`.
pub const POINTS_PER_PERIOD: usize = 2000;
/// Bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    RootFind,
    /// Minimum of the maximality residual, used when it has no root.
    ResidualMinimum,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::RootFind => "root-find",
            Method::ResidualMinimum => "residual-minimum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Discrete,
    /// The concurrence is 1 at every `t > 0` (the `cosθ = 0` family).
    AllPositiveTimes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport {
    pub times: Vec<f64>,
    pub method: Method,
    /// `|residual|` of the maximality equation (closed form) or `1 - C`
    /// (root finding) at each time.
    pub residuals: Vec<f64>,
    pub coverage: Coverage,
}

impl MaximalityReport {
    fn all_times(method: Method) -> Self {
        MaximalityReport {
            times: Vec::new(),
            method,
            residuals: Vec::new(),
            coverage: Coverage::AllPositiveTimes,
        }
    }
}

fn require_balanced(params: &SystemParams) -> Result<()> {
    if params.is_balanced() {
        Ok(())
    } else {
        Err(Error::PreconditionDissipative {
            kappa: params.kappa,
            gamma: params.gamma_a,
        })
    }
}

fn cos_theta_vanishes(init: &InitialState) -> bool {
    exact_sin_cos(init.theta).1 == 0.0
}

/// `|η(t)|⁴ - (64g⁴/Ω₀⁴) |sinh(Ωt/2)|⁴` for `κ = Γ`, where `Ω = iΩ₀`.
pub fn maximality_residual(params: &SystemParams, t: f64) -> Result<f64> {
    require_balanced(params)?;
    let df = derive_frequencies(params);
    Ok(residual_with(&df, t))
}

fn residual_with(df: &DerivedFrequencies, t: f64) -> f64 {
    let (eta, _) = eta_pair(df, t);
    let sinh_abs = (sinh_half_over(df.omega_c, t) * df.omega_c).norm();
    let g2 = df.coupling * df.coupling;
    let ratio = 8.0 * g2 / (df.omega0 * df.omega0);
    eta.norm_sqr().powi(2) - (ratio * sinh_abs * sinh_abs).powi(2)
}

/// `T_n = 2nπ/Ω₀ + (2/Ω₀) atan(Ω₀ / sqrt(8g² - (Δ-2χ)²))` for `n = 0..=n_max`.
pub fn maximal_times_closed_form(params: &SystemParams, n_max: usize) -> Result<MaximalityReport> {
    require_balanced(params)?;
    let df = derive_frequencies(params);
    let kd = params.kerr_detuning();
    let margin = 8.0 * params.g * params.g - kd * kd;
    if margin < 0.0 {
        return Err(Error::ClosedFormInapplicable { margin });
    }
    let w0 = df.omega0;
    let offset = 2.0 / w0 * (w0 / margin.sqrt()).atan();
    let times: Vec<f64> = (0..=n_max)
        .map(|n| 2.0 * n as f64 * PI / w0 + offset)
        .collect();
    let residuals = times.iter().map(|&t| residual_with(&df, t).abs()).collect();
    Ok(MaximalityReport {
        times,
        method: Method::ClosedForm,
        residuals,
        coverage: Coverage::Discrete,
    })
}

/// Closed form where it applies, numeric search otherwise. The numeric
/// result is truncated to the first `n_max + 1` times.
pub fn maximal_times(
    params: &SystemParams,
    init: &InitialState,
    n_max: usize,
    t_max: f64,
) -> Result<MaximalityReport> {
    if cos_theta_vanishes(init) {
        let method = if params.is_balanced() {
            Method::ClosedForm
        } else {
            Method::RootFind
        };
        return Ok(MaximalityReport::all_times(method));
    }
    match maximal_times_closed_form(params, n_max) {
        Ok(report) => Ok(report),
        Err(Error::PreconditionDissipative { .. }) | Err(Error::ClosedFormInapplicable { .. }) => {
            let mut report = find_maximal_times_numeric(params, init, t_max)?;
            report.times.truncate(n_max + 1);
            report.residuals.truncate(n_max + 1);
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy)]
struct Probe {
    t: f64,
    offset: f64,
    concurrence: f64,
}

fn probe(df: &DerivedFrequencies, init: &InitialState, t: f64) -> Option<Probe> {
    let s = sample_with(df, init, t).ok()?;
    if s.outcome.degenerate {
        return None;
    }
    Some(Probe {
        t,
        offset: s.outcome.p1 - 0.5,
        concurrence: s.outcome.concurrence,
    })
}

fn bisect(df: &DerivedFrequencies, init: &InitialState, lo: Probe, hi: Probe) -> f64 {
    let (mut a, mut b) = (lo, hi);
    while b.t - a.t > BISECTION_TOL {
        let mid = 0.5 * (a.t + b.t);
        match probe(df, init, mid) {
            Some(m) if m.offset == 0.0 => return mid,
            Some(m) if (m.offset < 0.0) == (a.offset < 0.0) => a = m,
            Some(m) => b = m,
            None => break,
        }
    }
    0.5 * (a.t + b.t)
}

fn golden_max(
    df: &DerivedFrequencies,
    init: &InitialState,
    mut a: f64,
    mut b: f64,
) -> Option<Probe> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = probe(df, init, x1)?;
    let mut f2 = probe(df, init, x2)?;
    while b - a > BISECTION_TOL {
        if f1.concurrence < f2.concurrence {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = probe(df, init, x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = probe(df, init, x1)?;
        }
    }
    probe(df, init, 0.5 * (a + b))
}

/// Every time in `[0, t_max]` where the concurrence reaches `1 - 1e-6` or
/// more, found on a dense scan and refined by bisection (sign changes of
/// `P₁ - 1/2`) or golden-section search (maxima that only touch).
pub fn find_maximal_times_numeric(
    params: &SystemParams,
    init: &InitialState,
    t_max: f64,
) -> Result<MaximalityReport> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if cos_theta_vanishes(init) {
        return Ok(MaximalityReport::all_times(Method::RootFind));
    }
    let df = derive_frequencies(params);
    let period = 2.0 * PI / df.omega0;
    let n = ((t_max / period) * POINTS_PER_PERIOD as f64)
        .ceil()
        .max(POINTS_PER_PERIOD as f64) as usize;
    let grid: Vec<Option<Probe>> = (0..=n)
        .into_par_iter()
        .map(|k| probe(&df, init, t_max * k as f64 / n as f64))
        .collect();

    let positive: Vec<&Probe> = grid.iter().flatten().filter(|p| p.t > 0.0).collect();
    if !positive.is_empty()
        && positive
            .iter()
            .all(|p| p.concurrence > 1.0 - MAXIMUM_THRESHOLD)
    {
        return Ok(MaximalityReport::all_times(Method::RootFind));
    }

    let mut found = Vec::new();
    for k in 0..n {
        let (Some(a), Some(b)) = (grid[k], grid[k + 1]) else {
            continue;
        };
        if a.offset == 0.0 {
            found.push(a.t);
        } else if (a.offset < 0.0) != (b.offset < 0.0) && b.offset != 0.0 {
            found.push(bisect(&df, init, a, b));
        }
    }
    if let Some(Some(last)) = grid.last() {
        if last.offset == 0.0 {
            found.push(last.t);
        }
    }
    for k in 1..n {
        let (Some(l), Some(m), Some(r)) = (grid[k - 1], grid[k], grid[k + 1]) else {
            continue;
        };
        let crossing = (l.offset < 0.0) != (m.offset < 0.0) || (m.offset < 0.0) != (r.offset < 0.0);
        if crossing || m.concurrence < l.concurrence || m.concurrence < r.concurrence {
            continue;
        }
        if let Some(best) = golden_max(&df, init, l.t, r.t) {
            if best.concurrence > 1.0 - MAXIMUM_THRESHOLD {
                found.push(best.t);
            }
        }
    }

    found.sort_by(f64::total_cmp);
    found.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    if found.is_empty() {
        return Err(Error::NoMaximaFound { t_max });
    }
    let residuals = found
        .iter()
        .map(|&t| probe(&df, init, t).map_or(f64::NAN, |p| 1.0 - p.concurrence))
        .collect();
    Ok(MaximalityReport {
        times: found,
        method: Method::RootFind,
        residuals,
        coverage: Coverage::Discrete,
    })
}

/// Time used by the θ-scan: `T_n` when the closed form applies, otherwise
/// the `n`-th minimum of the maximality residual, `t = (2n+1)π/Ω₀`.
pub fn scan_time(params: &SystemParams, n: usize) -> Result<(f64, Method)> {
    match maximal_times_closed_form(params, n) {
        Ok(report) => Ok((report.times[n], Method::ClosedForm)),
        Err(Error::ClosedFormInapplicable { .. }) => {
            let w0 = derive_frequencies(params).omega0;
            Ok(((2 * n + 1) as f64 * PI / w0, Method::ResidualMinimum))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub theta: f64,
    /// `None` where some amplitude vanishes and Θ is undefined.
    pub phase: Option<f64>,
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaScan {
    pub n: usize,
    pub time: f64,
    pub method: Method,
    pub points: Vec<ThetaPoint>,
}

/// Θ over `θ_k = 2πk/samples`, `k = 0..samples`, at the `n`-th scan time.
pub fn theta_scan(params: &SystemParams, phi: f64, n: usize, samples: usize) -> Result<ThetaScan> {
    require_balanced(params)?;
    if samples == 0 {
        return Err(Error::InvalidParams(
            "theta scan needs at least one sample".into(),
        ));
    }
    let (time, method) = scan_time(params, n)?;
    let df = derive_frequencies(params);
    let points = (0..samples)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / samples as f64;
            let s = sample_with(&df, &InitialState::new(theta, phi), time)?;
            Ok(ThetaPoint {
                theta,
                phase: s.outcome.phase(),
                concurrence: s.outcome.concurrence,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaScan {
        n,
        time,
        method,
        points,
    })
}

/// Remove 2π jumps between consecutive defined phases; gaps stay gaps.
pub fn unwrap_phases(phases: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut prev: Option<f64> = None;
    phases
        .iter()
        .map(|p| {
            let x = (*p)?;
            let y = match prev {
                Some(q) => x + 2.0 * PI * ((q - x) / (2.0 * PI)).round(),
                None => x,
            };
            prev = Some(y);
            Some(y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn balanced(d: f64, chi: f64) -> SystemParams {
        SystemParams::scaled(d, chi, 0.0, 0.0).unwrap()
    }

    #[test]
    fn first_time_on_resonance() {
        let r = maximal_times_closed_form(&balanced(0.0, 0.0), 1).unwrap();
        let t0 = PI / (4.0 * SQRT_2);
        assert!((r.times[0] - t0).abs() < 1e-15);
        assert!((t0 - 0.555_360_367_269_795_8).abs() < 1e-15);
        assert!((r.times[1] - (t0 + PI / SQRT_2)).abs() < 1e-14);
        assert!(r.residuals.iter().all(|&x| x < 1e-9));
    }

    #[test]
    fn residual_at_origin_is_one() {
        assert_eq!(maximality_residual(&balanced(0.0, 0.4), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn dissipative_params_rejected() {
        let p = SystemParams::scaled(0.0, 0.0, 0.1, 0.3).unwrap();
        assert!(matches!(
            maximal_times_closed_form(&p, 3),
            Err(Error::PreconditionDissipative { .. })
        ));
        assert!(maximality_residual(&p, 1.0).is_err());
        assert!(theta_scan(&p, 0.0, 0, 16).is_err());
    }

    #[test]
    fn large_kerr_detuning_needs_fallback() {
        let p = balanced(7.0, 0.4);
        assert!(matches!(
            maximal_times_closed_form(&p, 0),
            Err(Error::ClosedFormInapplicable { .. })
        ));
        let (t, m) = scan_time(&p, 0).unwrap();
        assert_eq!(m, Method::ResidualMinimum);
        // the residual is smallest there
        let r = |t| maximality_residual(&p, t).unwrap();
        assert!(r(t) <= r(t - 1e-3) && r(t) <= r(t + 1e-3));
    }

    #[test]
    fn excited_free_start_covers_all_times() {
        let p = SystemParams::scaled(10.0, 0.4, 2.0, 3.0).unwrap();
        let init = InitialState::new(FRAC_PI_2, 0.3);
        let r = find_maximal_times_numeric(&p, &init, 15.0).unwrap();
        assert_eq!(r.coverage, Coverage::AllPositiveTimes);
        assert_eq!(
            maximal_times(&p, &init, 3, 15.0).unwrap().coverage,
            Coverage::AllPositiveTimes
        );
    }

    #[test]
    fn numeric_reproduces_closed_form() {
        let p = balanced(0.0, 0.0);
        let init = InitialState::new(FRAC_PI_4, 0.0);
        let numeric = find_maximal_times_numeric(&p, &init, 15.0).unwrap();
        let closed = maximal_times_closed_form(&p, 5).unwrap();
        for t in closed.times.iter().filter(|&&t| t <= 15.0) {
            let nearest = numeric
                .times
                .iter()
                .map(|x| (x - t).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6, "T={t} missing (nearest {nearest:e})");
        }
        assert!(numeric.residuals.iter().all(|&r| r < 1e-9));
        assert!(numeric.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn no_maxima_reported_as_error() {
        // θ = 0 with (Δ-2χ)² > 8g² never reaches C = 1
        let p = balanced(7.0, 0.4);
        let init = InitialState::new(0.0, 0.0);
        assert!(matches!(
            find_maximal_times_numeric(&p, &init, 5.0),
            Err(Error::NoMaximaFound { .. })
        ));
    }

    #[test]
    fn unwrap_removes_jumps() {
        let raw = [Some(3.0), Some(-3.0), None, Some(3.1)];
        let u = unwrap_phases(&raw);
        assert!((u[1].unwrap() - (2.0 * PI - 3.0)).abs() < 1e-12);
        assert_eq!(u[2], None);
        assert!((u[3].unwrap() - 3.1).abs() < 1e-12);
    }
}
