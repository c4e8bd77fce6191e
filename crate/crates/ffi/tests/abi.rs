use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::CStr;
use std::ptr;

use kerrswap_ffi::*;

fn new_system(delta: f64, chi: f64, kappa: f64, gamma: f64) -> *mut KsSystem {
    let mut sys = ptr::null_mut();
    let status = unsafe { ks_system_new(delta, chi, kappa, gamma, &mut sys) };
    assert_eq!(status, KsStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ks_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn empty_outcome() -> KsOutcome {
    KsOutcome {
        t: 0.0,
        concurrence: 0.0,
        p1: 0.0,
        p2: 0.0,
        theta_phase: 0.0,
        norm: 0.0,
        degenerate: false,
        amplitudes_re: [0.0; 4],
        amplitudes_im: [0.0; 4],
    }
}

#[test]
fn outcome_matches_library() {
    let sys = new_system(10.0, 0.4, 2.0, 3.0);
    let mut out = empty_outcome();
    assert_eq!(unsafe { ks_swap_outcome(sys, 1.0, &mut out) }, KsStatus::Ok);
    let p = kerrswap::params::SystemParams::scaled(10.0, 0.4, 2.0, 3.0).unwrap();
    let init = kerrswap::params::InitialState::new(std::f64::consts::FRAC_PI_4, 0.0);
    let want = kerrswap::trajectory::swap_at(&p, &init, 1.0).unwrap();
    assert_eq!(out.concurrence, want.outcome.concurrence);
    assert_eq!(out.theta_phase, want.outcome.theta_phase);
    assert_eq!(out.amplitudes_re[3], want.amplitudes[3].re);
    unsafe { ks_system_free(sys) };
}

#[test]
fn degenerate_start_reports_nan() {
    let sys = new_system(0.0, 0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { ks_system_set_initial_state(sys, FRAC_PI_2, 0.0) },
        KsStatus::Ok
    );
    let mut out = empty_outcome();
    assert_eq!(unsafe { ks_swap_outcome(sys, 0.0, &mut out) }, KsStatus::Ok);
    assert!(out.degenerate);
    assert!(out.concurrence.is_nan());
    unsafe { ks_system_free(sys) };
}

#[test]
fn evolve_fills_buffer() {
    let sys = new_system(0.0, 0.0, 0.0, 0.0);
    let mut buf = vec![empty_outcome(); 11];
    assert_eq!(
        unsafe { ks_evolve(sys, 10.0, 11, buf.as_mut_ptr(), buf.len()) },
        KsStatus::Ok
    );
    assert_eq!(buf[10].t, 10.0);
    assert!(buf
        .iter()
        .all(|o| (o.p1 + o.p2 - 1.0).abs() < 1e-12 || o.degenerate));
    assert_eq!(
        unsafe { ks_evolve(sys, 10.0, 12, buf.as_mut_ptr(), buf.len()) },
        KsStatus::BufferTooSmall
    );
    assert!(last_error().contains("12"));
    unsafe { ks_system_free(sys) };
}

#[test]
fn maximal_times_closed_form() {
    let sys = new_system(0.0, 0.0, 0.5, 0.5);
    let mut times = [0.0; 8];
    let (mut len, mut all) = (0usize, false);
    let status = unsafe {
        ks_maximal_times(
            sys,
            3,
            15.0,
            times.as_mut_ptr(),
            times.len(),
            &mut len,
            &mut all,
        )
    };
    assert_eq!(status, KsStatus::Ok);
    assert_eq!(len, 4);
    assert!(!all);
    assert!((times[0] - PI / (4.0 * 2f64.sqrt())).abs() < 1e-15);
    let mut r = 1.0;
    assert_eq!(
        unsafe { ks_maximality_residual(sys, times[0], &mut r) },
        KsStatus::Ok
    );
    assert!(r.abs() < 1e-12);

    let mut small = [0.0; 2];
    let status =
        unsafe { ks_maximal_times(sys, 3, 15.0, small.as_mut_ptr(), 2, &mut len, &mut all) };
    assert_eq!(status, KsStatus::BufferTooSmall);
    assert_eq!(len, 4);
    unsafe { ks_system_free(sys) };
}

#[test]
fn excited_free_start_flags_all_times() {
    let sys = new_system(10.0, 0.4, 2.0, 3.0);
    unsafe { ks_system_set_initial_state(sys, FRAC_PI_2, 1.0) };
    let (mut len, mut all) = (7usize, false);
    let status = unsafe { ks_maximal_times(sys, 3, 15.0, ptr::null_mut(), 0, &mut len, &mut all) };
    assert_eq!(status, KsStatus::Ok);
    assert!(all);
    assert_eq!(len, 0);
    unsafe { ks_system_free(sys) };
}

#[test]
fn errors_are_codes_with_messages() {
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { ks_system_new(0.0, -1.0, 0.0, 0.0, &mut sys) },
        KsStatus::InvalidArgument
    );
    assert!(sys.is_null());
    assert!(last_error().contains("chi"));

    assert_eq!(
        unsafe { ks_swap_outcome(ptr::null(), 1.0, ptr::null_mut()) },
        KsStatus::NullPointer
    );
    assert_eq!(
        unsafe { ks_system_new(0.0, 0.0, 0.0, 0.0, ptr::null_mut()) },
        KsStatus::NullPointer
    );

    let lossy = new_system(0.0, 0.0, 0.1, 0.3);
    let mut r = 0.0;
    assert_eq!(
        unsafe { ks_maximality_residual(lossy, 1.0, &mut r) },
        KsStatus::Precondition
    );
    let mut out = empty_outcome();
    assert_eq!(
        unsafe { ks_swap_outcome(lossy, -1.0, &mut out) },
        KsStatus::InvalidArgument
    );
    unsafe { ks_system_free(lossy) };
    unsafe { ks_system_free(ptr::null_mut()) };
}

#[test]
fn wootters_bell_state() {
    // (|01⟩ + |10⟩)/√2
    let mut re = [0.0; 16];
    let im = [0.0; 16];
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        re[4 * i + j] = 0.5;
    }
    let mut c = 0.0;
    assert_eq!(
        unsafe { ks_wootters_concurrence(re.as_ptr(), im.as_ptr(), &mut c) },
        KsStatus::Ok
    );
    assert!((c - 1.0).abs() < 1e-12);
    re[0] = 0.5;
    assert_eq!(
        unsafe { ks_wootters_concurrence(re.as_ptr(), im.as_ptr(), &mut c) },
        KsStatus::InvalidArgument
    );
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ks_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kerrswap.h"))
            .unwrap();
    for name in [
        "ks_system_new",
        "ks_system_free",
        "ks_system_set_initial_state",
        "ks_swap_outcome",
        "ks_evolve",
        "ks_maximal_times",
        "ks_maximality_residual",
        "ks_wootters_concurrence",
        "ks_last_error_message",
        "ks_version",
        "KS_STATUS_BUFFER_TOO_SMALL",
        "typedef struct KsSystem KsSystem",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler on PATH; syntax check not run");
        return;
    };
    assert!(cc.status.success());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"kerrswap.h\"\nint main(void) { KsSystem *s = 0; KsOutcome o; \
         return ks_system_new(0, 0, 0, 0, &s) == KS_STATUS_OK && ks_swap_outcome(s, 1.0, &o) == KS_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
