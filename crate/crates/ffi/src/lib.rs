//! C ABI over `kerrswap`.
//!
//! A `KsSystem` is an opaque handle holding the parameters and the initial
//! state of subsystem 1. Every call returns a `KsStatus`; on failure the
//! message is available from `ks_last_error_message` on the same thread.
//! Panics never cross the boundary; they surface as `KS_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kerrswap::conditions::{maximal_times, maximality_residual, Coverage};
use kerrswap::params::{InitialState, SystemParams};
use kerrswap::swap::{concurrence_wootters, TwoQubitDensity};
use kerrswap::trajectory::{evolve, swap_at, SwapSample, TimeGrid};
use kerrswap::Error;
use nalgebra::Matrix4;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    Precondition = 4,
    NoMaxima = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Swap observables at one time. Undefined values are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub t: f64,
    pub concurrence: f64,
    pub p1: f64,
    pub p2: f64,
    /// Bell phase Θ in (-π, π].
    pub theta_phase: f64,
    pub norm: f64,
    pub degenerate: bool,
    /// Normalized `A₁..A₄`, real parts.
    pub amplitudes_re: [f64; 4],
    /// Normalized `A₁..A₄`, imaginary parts.
    pub amplitudes_im: [f64; 4],
}

/// Opaque handle.
pub struct KsSystem {
    params: SystemParams,
    init: InitialState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> KsStatus {
    match err {
        Error::InvalidParams(_) => KsStatus::InvalidArgument,
        Error::DegenerateNorm { .. }
        | Error::DegenerateOutcome { .. }
        | Error::UndefinedPhase { .. } => KsStatus::Degenerate,
        Error::PreconditionDissipative { .. } | Error::ClosedFormInapplicable { .. } => {
            KsStatus::Precondition
        }
        Error::NoMaximaFound { .. } => KsStatus::NoMaxima,
        Error::NonPhysicalDensity(_) => KsStatus::InvalidArgument,
        _ => KsStatus::Internal,
    }
}

fn fail(status: KsStatus, msg: &str) -> KsStatus {
    set_error(msg);
    status
}

/// Run `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), KsStatus>) -> KsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KsStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(KsStatus::Internal, "internal panic"),
    }
}

fn model<T>(r: kerrswap::Result<T>) -> Result<T, KsStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn handle<'a>(sys: *const KsSystem) -> Result<&'a KsSystem, KsStatus> {
    // SAFETY: the caller passes a pointer from ks_system_new that has not been freed.
    unsafe { sys.as_ref() }.ok_or_else(|| fail(KsStatus::NullPointer, "null system handle"))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), KsStatus> {
    if p.is_null() {
        Err(fail(KsStatus::NullPointer, &format!("null {what}")))
    } else {
        Ok(())
    }
}

fn to_outcome(s: &SwapSample) -> KsOutcome {
    KsOutcome {
        t: s.t,
        concurrence: s.outcome.concurrence,
        p1: s.outcome.p1,
        p2: s.outcome.p2,
        theta_phase: s.outcome.theta_phase,
        norm: s.outcome.n_t,
        degenerate: s.outcome.degenerate,
        amplitudes_re: s.amplitudes.map(|a| a.re),
        amplitudes_im: s.amplitudes.map(|a| a.im),
    }
}

/// Create a system with `g = 1`, rates in units of `g`, and initial angles
/// `θ = π/4`, `φ = 0`. The handle must be released with `ks_system_free`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_system_new(
    delta: f64,
    chi: f64,
    kappa: f64,
    gamma: f64,
    out: *mut *mut KsSystem,
) -> KsStatus {
    guard(|| {
        non_null(out, "output pointer")?;
        let params = model(SystemParams::scaled(delta, chi, kappa, gamma))?;
        let sys = Box::new(KsSystem {
            params,
            init: InitialState::new(std::f64::consts::FRAC_PI_4, 0.0),
        });
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(sys) };
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `sys` must be null or a handle from `ks_system_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_system_free(sys: *mut KsSystem) {
    if !sys.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Set `cosθ|e,1⟩ + sinθ e^{-iφ}|g,2⟩` as the start of subsystem 1.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_system_set_initial_state(
    sys: *mut KsSystem,
    theta: f64,
    phi: f64,
) -> KsStatus {
    guard(|| {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(fail(KsStatus::InvalidArgument, "angles must be finite"));
        }
        // SAFETY: the caller passes a live handle.
        let sys = unsafe { sys.as_mut() }
            .ok_or_else(|| fail(KsStatus::NullPointer, "null system handle"))?;
        sys.init = InitialState::new(theta, phi);
        Ok(())
    })
}

/// Swap observables at scaled time `t`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_swap_outcome(
    sys: *const KsSystem,
    t: f64,
    out: *mut KsOutcome,
) -> KsStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let sys = unsafe { handle(sys) }?;
        non_null(out, "output pointer")?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(fail(
                KsStatus::InvalidArgument,
                "t must be finite and non-negative",
            ));
        }
        let s = model(swap_at(&sys.params, &sys.init, t))?;
        // SAFETY: checked non-null above.
        unsafe { *out = to_outcome(&s) };
        Ok(())
    })
}

/// Observables on `t_k = t_max k / (samples - 1)`, written to `out[0..samples]`.
///
/// # Safety
/// `sys` must be a live handle and `out` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn ks_evolve(
    sys: *const KsSystem,
    t_max: f64,
    samples: usize,
    out: *mut KsOutcome,
    capacity: usize,
) -> KsStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let sys = unsafe { handle(sys) }?;
        non_null(out, "output buffer")?;
        if capacity < samples {
            return Err(fail(
                KsStatus::BufferTooSmall,
                &format!("buffer holds {capacity} samples, {samples} needed"),
            ));
        }
        let grid = model(TimeGrid::new(t_max, samples))?;
        let series = model(evolve(&sys.params, &sys.init, &grid))?;
        // SAFETY: out holds at least `samples` elements.
        let dst = unsafe { std::slice::from_raw_parts_mut(out, samples) };
        for (d, s) in dst.iter_mut().zip(&series.samples) {
            *d = to_outcome(s);
        }
        Ok(())
    })
}

/// Times of maximal entanglement, closed form when `κ = Γ` and applicable,
/// numeric otherwise. `*all_times` is set when the concurrence is 1 for
/// every `t > 0`, in which case `*len` is 0.
///
/// # Safety
/// `sys` must be a live handle; `times` must hold `capacity` elements;
/// `len` and `all_times` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_maximal_times(
    sys: *const KsSystem,
    n_max: usize,
    t_max: f64,
    times: *mut f64,
    capacity: usize,
    len: *mut usize,
    all_times: *mut bool,
) -> KsStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let sys = unsafe { handle(sys) }?;
        non_null(len, "length pointer")?;
        non_null(all_times, "flag pointer")?;
        let report = model(maximal_times(&sys.params, &sys.init, n_max, t_max))?;
        // SAFETY: checked non-null above.
        unsafe {
            *len = report.times.len();
            *all_times = report.coverage == Coverage::AllPositiveTimes;
        }
        if report.times.len() > capacity {
            return Err(fail(
                KsStatus::BufferTooSmall,
                &format!(
                    "buffer holds {capacity} times, {} found",
                    report.times.len()
                ),
            ));
        }
        if !report.times.is_empty() {
            non_null(times, "times buffer")?;
            // SAFETY: times holds at least `capacity` elements.
            let dst = unsafe { std::slice::from_raw_parts_mut(times, report.times.len()) };
            dst.copy_from_slice(&report.times);
        }
        Ok(())
    })
}

/// Maximality residual at `t` (requires `κ = Γ`).
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_maximality_residual(
    sys: *const KsSystem,
    t: f64,
    out: *mut f64,
) -> KsStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let sys = unsafe { handle(sys) }?;
        non_null(out, "output pointer")?;
        let r = model(maximality_residual(&sys.params, t))?;
        // SAFETY: checked non-null above.
        unsafe { *out = r };
        Ok(())
    })
}

/// Concurrence of a two-qubit density matrix given row-major as 16 real
/// and 16 imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to 16 readable doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_wootters_concurrence(
    re: *const f64,
    im: *const f64,
    out: *mut f64,
) -> KsStatus {
    guard(|| {
        non_null(re, "real part")?;
        non_null(im, "imaginary part")?;
        non_null(out, "output pointer")?;
        // SAFETY: both buffers hold 16 doubles.
        let (re, im) = unsafe {
            (
                std::slice::from_raw_parts(re, 16),
                std::slice::from_raw_parts(im, 16),
            )
        };
        let m = Matrix4::from_fn(|i, j| Complex64::new(re[4 * i + j], im[4 * i + j]));
        let rho = model(TwoQubitDensity::new(m))?;
        // SAFETY: checked non-null above.
        unsafe { *out = concurrence_wootters(&rho) };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ks_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version contains a nul byte"),
        };
    VERSION.as_ptr()
}
