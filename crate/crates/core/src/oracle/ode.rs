//! Adaptive RK4 with step doubling, applied to
//! `i d/dt (c₁, c₂) = g√2 (e^{iζt} c₂, e^{-iζt} c₁)`.
//!
//! The off-diagonal entries are not complex conjugates of each other: ζ is
//! complex whenever `κ ≠ Γ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{derive_frequencies, SystemParams};

pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-6;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest accepted error estimate, in units of the tolerance.
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<[Complex64; 2]>,
    pub step_stats: StepStats,
}

fn axpy<const N: usize>(y: &[Complex64; N], h: f64, k: &[Complex64; N]) -> [Complex64; N] {
    std::array::from_fn(|i| y[i] + k[i] * h)
}

fn max_abs<const N: usize>(y: &[Complex64; N]) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// One classical RK4 step.
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[Complex64; N], h: f64) -> [Complex64; N]
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
}

/// Fixed-step RK4 from `t = 0` to `t_end`.
pub fn rk4_fixed<const N: usize, F>(
    f: &F,
    y0: [Complex64; N],
    t_end: f64,
    steps: usize,
) -> [Complex64; N]
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let h = t_end / steps as f64;
    let mut y = y0;
    for k in 0..steps {
        y = rk4_step(f, k as f64 * h, &y, h);
    }
    y
}

/// Integrate from `t = 0` and record the state at each of `times` (sorted,
/// non-negative). The error of a step is measured relative to the size of
/// the state, so exponentially growing solutions keep their relative
/// accuracy.
pub fn integrate_adaptive<const N: usize, F>(
    f: &F,
    y0: [Complex64; N],
    times: &[f64],
    tol: f64,
) -> Result<(Vec<[Complex64; N]>, StepStats)>
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    if times.windows(2).any(|w| !(w[0] <= w[1])) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidParams(
            "sample times must be sorted and non-negative".into(),
        ));
    }
    let mut stats = StepStats::default();
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut y = y0;
    let mut h: f64 = 1e-3;
    for &target in times {
        while t < target {
            let step = h.min(target - t);
            if step < 1e-14 * (1.0 + t) && target - t > step {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let full = rk4_step(f, t, &y, step);
            let mid = rk4_step(f, t, &y, 0.5 * step);
            let half = rk4_step(f, t + 0.5 * step, &mid, 0.5 * step);
            let delta: [Complex64; N] = std::array::from_fn(|i| half[i] - full[i]);
            let scale = max_abs(&y).max(max_abs(&half)).max(f64::MIN_POSITIVE);
            let err = max_abs(&delta) / (15.0 * tol * scale);
            if err <= 1.0 {
                y = std::array::from_fn(|i| half[i] + delta[i] / 15.0);
                t = if step == target - t { target } else { t + step };
                stats.accepted += 1;
                stats.max_error = stats.max_error.max(err);
            } else {
                stats.rejected += 1;
            }
            let factor = if err == 0.0 {
                4.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.1, 4.0)
            };
            // a step shortened to land on a sample time says little about h
            if step == h || err > 1.0 {
                h = step * factor;
            }
            if h < 1e-14 * (1.0 + t) {
                return Err(Error::StepUnderflow { t, h });
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}

/// Right-hand side `dc/dt = -i M(t) c` on the two-photon sector.
pub fn interaction_rhs(params: &SystemParams) -> impl Fn(f64, &[Complex64; 2]) -> [Complex64; 2] {
    let zeta = derive_frequencies(params).zeta;
    let coupling = params.g * std::f64::consts::SQRT_2;
    move |t, c| {
        let up = (I * zeta * t).exp();
        let down = (-I * zeta * t).exp();
        [-I * coupling * up * c[1], -I * coupling * down * c[0]]
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if (MIN_TOL..=MAX_TOL).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "tolerance must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}"
        )))
    }
}

/// Oracle trajectory at arbitrary sorted times.
pub fn integrate_interaction_picture_at(
    params: &SystemParams,
    init: [Complex64; 2],
    times: &[f64],
    tol: f64,
) -> Result<OdeTrajectory> {
    check_tol(tol)?;
    params.validate()?;
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParams(
            "sample times must be strictly increasing".into(),
        ));
    }
    let rhs = interaction_rhs(params);
    let (states, step_stats) = integrate_adaptive(&rhs, init, times, tol)?;
    Ok(OdeTrajectory {
        times: times.to_vec(),
        states,
        step_stats,
    })
}

/// Oracle trajectory on the uniform grid `t_max · k / (n_samples - 1)`.
pub fn integrate_interaction_picture(
    params: &SystemParams,
    init: [Complex64; 2],
    t_max: f64,
    n_samples: usize,
    tol: f64,
) -> Result<OdeTrajectory> {
    if n_samples < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need t_max > 0 and at least 2 samples (got {t_max}, {n_samples})"
        )));
    }
    let times: Vec<f64> = (0..n_samples)
        .map(|k| t_max * k as f64 / (n_samples - 1) as f64)
        .collect();
    integrate_interaction_picture_at(params, init, &times, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resonant_rabi_flop() {
        let p = SystemParams::scaled(0.0, 0.0, 0.4, 0.4).unwrap();
        let traj = integrate_interaction_picture(&p, [c(1.0, 0.0), c(0.0, 0.0)], 10.0, 101, 1e-12)
            .unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let want = (2f64.sqrt() * t).cos().powi(2);
            assert!((s[0].norm_sqr() - want).abs() < 1e-10, "t={t}");
        }
        assert!(traj.step_stats.accepted > 0);
        assert!(traj.step_stats.max_error <= 1.0);
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let f = |_t: f64, _y: &[Complex64; 2]| [c(0.0, 0.0); 2];
        let y0 = [c(0.3, 0.1), c(-0.2, 0.7)];
        let (ys, _) = integrate_adaptive(&f, y0, &[0.0, 1.0, 5.0], 1e-10).unwrap();
        assert!(ys.iter().all(|y| *y == y0));
    }

    #[test]
    fn tolerance_range_enforced() {
        let p = SystemParams::scaled(0.0, 0.0, 0.0, 0.0).unwrap();
        let init = [c(1.0, 0.0), c(0.0, 0.0)];
        assert!(integrate_interaction_picture(&p, init, 1.0, 3, 1e-14).is_err());
        assert!(integrate_interaction_picture(&p, init, 1.0, 3, 1e-5).is_err());
        assert!(integrate_interaction_picture(&p, init, 1.0, 3, 1e-6).is_ok());
    }

    #[test]
    fn fixed_step_is_fourth_order() {
        let p = SystemParams::scaled(3.0, 0.2, 0.5, 0.1).unwrap();
        let rhs = interaction_rhs(&p);
        let y0 = [c(0.6, 0.0), c(0.0, 0.8)];
        let reference = rk4_fixed(&rhs, y0, 2.0, 20_000);
        let err = |n| {
            let y = rk4_fixed(&rhs, y0, 2.0, n);
            (0..2)
                .map(|i| (y[i] - reference[i]).norm())
                .fold(0.0, f64::max)
        };
        let ratio = err(100) / err(200);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn tighter_tolerance_shrinks_error() {
        let p = SystemParams::scaled(-4.0, 0.6, 1.0, 2.5).unwrap();
        let init = [c(0.0, 1.0), c(0.0, 0.0)];
        let reference = integrate_interaction_picture(&p, init, 6.0, 2, 1e-13).unwrap();
        let dev = |tol| {
            let t = integrate_interaction_picture(&p, init, 6.0, 2, tol).unwrap();
            let (a, b) = (t.states[1], reference.states[1]);
            let s = a[0].norm().max(a[1].norm());
            (0..2).map(|i| (a[i] - b[i]).norm() / s).fold(0.0, f64::max)
        };
        let (loose, tight) = (dev(1e-6), dev(1e-9));
        assert!(tight < loose, "{tight:e} vs {loose:e}");
        assert!(tight < 1e-7);
    }
}
