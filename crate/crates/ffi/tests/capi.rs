use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use branchlab_ffi::*;

fn last_error() -> String {
    let p = bl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(bl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn growth_exponent() {
    let (mut nu, mut period) = (0.0, 0usize);
    assert_eq!(unsafe { bl_nu(1.0, &mut nu, &mut period) }, BlStatus::Ok);
    assert!((nu - 3f64.ln() / 3.0).abs() < 1e-15);
    assert_eq!(period, 3);
    assert_eq!(unsafe { bl_nu(-1.0, &mut nu, &mut period) }, BlStatus::Domain);
    assert!(last_error().contains("domain"));
    assert_eq!(unsafe { bl_nu(1.0, ptr::null_mut(), &mut period) }, BlStatus::NullPointer);
    assert!((bl_nu_continuous_approx(0.2) - 5f64.ln()).abs() < 1e-15);
}

#[test]
fn recursion_handle_lifecycle() {
    let mut s: *mut BlChiSeries = ptr::null_mut();
    unsafe {
        assert_eq!(bl_chi_solve(1.0, BlSeedKind::Linear, 300, &mut s), BlStatus::Ok);
        assert_eq!(bl_chi_len(s), 300);
        let mut l = 0.0;
        assert_eq!(bl_chi_log_chi(s, 10, &mut l), BlStatus::Ok);
        assert!((l - 36f64.ln()).abs() < 1e-12);
        let mut i = 0usize;
        assert_eq!(bl_chi_dominant_index(s, 9, &mut i), BlStatus::Ok);
        assert_eq!(i, 6);
        assert_eq!(bl_chi_log_chi(s, 0, &mut l), BlStatus::OutOfRange);
        assert_eq!(bl_chi_log_chi(s, 301, &mut l), BlStatus::OutOfRange);
        assert_eq!(bl_chi_nu_hat(s, 200, &mut l), BlStatus::Ok);
        assert!((l - 3f64.ln() / 3.0).abs() < 1e-9);

        let (mut t1, mut period) = (0usize, 0usize);
        let mut small = [0.0; 2];
        assert_eq!(
            bl_chi_detect_period(s, 1e-9, &mut t1, &mut period, small.as_mut_ptr(), small.len()),
            BlStatus::BufferTooSmall
        );
        assert_eq!(period, 3);
        let mut cycle = [0.0; 3];
        assert_eq!(
            bl_chi_detect_period(s, 1e-9, &mut t1, &mut period, cycle.as_mut_ptr(), cycle.len()),
            BlStatus::Ok
        );
        assert!(cycle.iter().any(|c| c.abs() < 1e-9));
        bl_chi_free(s);
        bl_chi_free(ptr::null_mut());
    }
}

#[test]
fn constructive_seed_through_ffi() {
    let phi = [4.0 / 3.0, 1.5, 1.5];
    let mut s: *mut BlChiSeries = ptr::null_mut();
    unsafe {
        assert_eq!(bl_chi_solve_ctex(1.0, phi.as_ptr(), 3, 20, &mut s), BlStatus::Ok);
        let mut l = 0.0;
        // chi_1 = psi_T = phi_1 phi_2 phi_3 = 3
        assert_eq!(bl_chi_log_chi(s, 1, &mut l), BlStatus::Ok);
        assert!((l - 3f64.ln()).abs() < 1e-12);
        bl_chi_free(s);
        let bad = [1.2, 1.5, 1.5];
        assert_eq!(bl_chi_solve_ctex(1.0, bad.as_ptr(), 3, 20, &mut s), BlStatus::Constraint);
    }
}

#[test]
fn simulation_handle() {
    let mut p = std::mem::MaybeUninit::<BlSimParams>::uninit();
    unsafe {
        assert_eq!(bl_sim_params_default(p.as_mut_ptr()), BlStatus::Ok);
        let mut p = p.assume_init();
        p.log_f = 50.0;
        p.t_max = 10;
        p.model = BlModel::Mmm;
        let mut r: *mut BlRunRecord = ptr::null_mut();
        assert_eq!(bl_sim_run(&p, &mut r), BlStatus::Ok);
        assert_eq!(bl_run_len(r), 11);
        assert!(bl_run_survived(r));
        assert_eq!(bl_run_restarts(r), 0);
        let (mut x, mut w) = (0.0, 0.0);
        assert_eq!(bl_run_log_x(r, 0, &mut x), BlStatus::Ok);
        assert_eq!(x, 0.0);
        assert_eq!(bl_run_log_x(r, 10, &mut x), BlStatus::Ok);
        assert_eq!(bl_run_log_w(r, 10, &mut w), BlStatus::Ok);
        assert!(x > 50.0 && w > 0.0);
        assert_eq!(bl_run_log_x(r, 11, &mut x), BlStatus::OutOfRange);
        bl_run_free(r);

        p.beta = 2.0;
        assert_eq!(bl_sim_run(&p, &mut r), BlStatus::Domain);
    }
}

#[test]
fn tail_spec_parsing() {
    let mut g = 0.0;
    unsafe {
        assert_eq!(bl_tail_log_tail(c"pareto:alpha=2".as_ptr(), 3.0, &mut g), BlStatus::Ok);
        assert_eq!(g, -6.0);
        assert_eq!(bl_tail_log_tail(c"gauss".as_ptr(), 3.0, &mut g), BlStatus::Parse);
    }
}

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/branchlab.h");

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(HEADER).unwrap();
    for name in [
        "bl_version",
        "bl_last_error_message",
        "bl_nu(",
        "bl_nu_continuous_approx",
        "bl_chi_solve(",
        "bl_chi_solve_ctex",
        "bl_chi_free",
        "bl_chi_len",
        "bl_chi_log_chi",
        "bl_chi_dominant_index",
        "bl_chi_nu_hat",
        "bl_chi_detect_period",
        "bl_sim_params_default",
        "bl_sim_run",
        "bl_run_free",
        "bl_run_len",
        "bl_run_log_x",
        "bl_run_log_w",
        "bl_tail_log_tail",
        "typedef struct BlChiSeries BlChiSeries",
        "BL_STATUS_OK = 0",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{HEADER}\"\nint main(void) {{ BlChiSeries *s = 0; BlStatus st = bl_chi_solve(1.0, BL_SEED_KIND_LINEAR, 10, &s); bl_chi_free(s); return st; }}\n"
        ),
    )
    .unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
