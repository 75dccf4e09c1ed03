//! C ABI for `branchlab`.
//!
//! Every fallible function returns a [`BlStatus`]; on failure the message is
//! available from [`bl_last_error_message`] on the same thread. Recursion
//! solutions and simulation records are opaque handles released with the
//! matching `*_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use branchlab::chi::{build_ctex_seed, solve_chi, ChiSeries, SeedSequence};
use branchlab::growth::{nu_continuous_approx, GrowthLaw};
use branchlab::sim::{run, Model, RunRecord, SimConfig};
use branchlab::{Error, TailModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NonConvergence = 3,
    NoPeriod = 4,
    Constraint = 5,
    CapExceeded = 6,
    TooManyRestarts = 7,
    MissingHistory = 8,
    InsufficientOverlap = 9,
    Parse = 10,
    OutOfRange = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlSeedKind {
    /// `a_t = t`
    Linear = 0,
    /// `a_t = t / 2`
    Half = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlModel {
    Fmm = 0,
    Mmm = 1,
}

/// Plain-data simulation parameters. `tail_gamma = 0` selects the pure
/// Pareto tail.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlSimParams {
    pub model: BlModel,
    pub tail_alpha: f64,
    pub tail_gamma: f64,
    pub beta: f64,
    pub log_f: f64,
    pub t_max: usize,
    pub seed: u64,
    pub exact_event_cap: f64,
    pub mmm_bins_per_decade: u32,
    pub mmm_poisson_threshold: f64,
    pub restart_on_extinction: bool,
}

/// Opaque recursion solution.
pub struct BlChiSeries(ChiSeries);

/// Opaque simulation record.
pub struct BlRunRecord(RunRecord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BlStatus {
    match e {
        Error::Domain(_) => BlStatus::Domain,
        Error::NonConvergence { .. } => BlStatus::NonConvergence,
        Error::NoPeriodDetected { .. } => BlStatus::NoPeriod,
        Error::ConstraintViolation(_) => BlStatus::Constraint,
        Error::CapExceeded { .. } => BlStatus::CapExceeded,
        Error::TooManyRestarts { .. } => BlStatus::TooManyRestarts,
        Error::MissingHistory(_) => BlStatus::MissingHistory,
        Error::InsufficientOverlap { .. } => BlStatus::InsufficientOverlap,
        Error::Parse(_) => BlStatus::Parse,
    }
}

fn fail(status: BlStatus, msg: impl Into<String>) -> BlStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), BlStatus>>(f: F) -> BlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(BlStatus::Panic, "panic inside branchlab"),
    }
}

fn lib<T>(r: branchlab::Result<T>) -> Result<T, BlStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), BlStatus> {
    if p.is_null() {
        Err(fail(BlStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Growth exponent and horizon for tail index `alpha`.
#[no_mangle]
pub unsafe extern "C" fn bl_nu(alpha: f64, out_nu: *mut f64, out_period: *mut usize) -> BlStatus {
    guard(|| {
        non_null(out_nu, "out_nu")?;
        non_null(out_period, "out_period")?;
        let law = lib(GrowthLaw::new(alpha))?;
        *out_nu = law.nu;
        *out_period = law.period;
        Ok(())
    })
}

/// Continuous approximation of the growth exponent.
#[no_mangle]
pub extern "C" fn bl_nu_continuous_approx(alpha: f64) -> f64 {
    nu_continuous_approx(alpha)
}

unsafe fn store_series(out: *mut *mut BlChiSeries, series: ChiSeries) {
    *out = Box::into_raw(Box::new(BlChiSeries(series)));
}

/// Solves the recursion with a built-in driving sequence.
#[no_mangle]
pub unsafe extern "C" fn bl_chi_solve(
    alpha: f64,
    seed: BlSeedKind,
    t_max: usize,
    out: *mut *mut BlChiSeries,
) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        let seq = match seed {
            BlSeedKind::Linear => SeedSequence::Linear,
            BlSeedKind::Half => SeedSequence::Half,
        };
        store_series(out, lib(solve_chi(alpha, seq, t_max))?);
        Ok(())
    })
}

/// Solves the recursion with the constructive seed of the cycle
/// `phi[0..len]`.
#[no_mangle]
pub unsafe extern "C" fn bl_chi_solve_ctex(
    alpha: f64,
    phi: *const f64,
    len: usize,
    t_max: usize,
    out: *mut *mut BlChiSeries,
) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(phi, "phi")?;
        let phi = std::slice::from_raw_parts(phi, len);
        let seq = lib(build_ctex_seed(alpha, phi))?;
        store_series(out, lib(solve_chi(alpha, seq, t_max))?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bl_chi_free(series: *mut BlChiSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of solved generations (t runs from 1 to this value).
#[no_mangle]
pub unsafe extern "C" fn bl_chi_len(series: *const BlChiSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.t_max())
}

unsafe fn series_at<'a>(series: *const BlChiSeries, t: usize) -> Result<&'a ChiSeries, BlStatus> {
    non_null(series, "series")?;
    let s = &(*series).0;
    if t == 0 || t > s.t_max() {
        return Err(fail(BlStatus::OutOfRange, format!("t = {t} outside 1..={}", s.t_max())));
    }
    Ok(s)
}

/// `log chi_t`.
#[no_mangle]
pub unsafe extern "C" fn bl_chi_log_chi(series: *const BlChiSeries, t: usize, out: *mut f64) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = series_at(series, t)?.log_chi(t);
        Ok(())
    })
}

/// Largest maximizing index `I_t` (0 when the seed term wins).
#[no_mangle]
pub unsafe extern "C" fn bl_chi_dominant_index(
    series: *const BlChiSeries,
    t: usize,
    out: *mut usize,
) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = series_at(series, t)?.dominant_index(t);
        Ok(())
    })
}

/// `(log chi_{t+T} - log chi_t) / T`.
#[no_mangle]
pub unsafe extern "C" fn bl_chi_nu_hat(series: *const BlChiSeries, t: usize, out: *mut f64) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(series_at(series, t)?.nu_hat(t))?;
        Ok(())
    })
}

/// Eventual cycle of `log c_t`: writes `t1` and `T` values of `log C_k`
/// into `cycle[0..cap]`. Fails with `BUFFER_TOO_SMALL` (and still sets
/// `out_period`) when `cap < T`.
#[no_mangle]
pub unsafe extern "C" fn bl_chi_detect_period(
    series: *const BlChiSeries,
    tol: f64,
    out_t1: *mut usize,
    out_period: *mut usize,
    cycle: *mut f64,
    cap: usize,
) -> BlStatus {
    guard(|| {
        non_null(series, "series")?;
        non_null(out_t1, "out_t1")?;
        non_null(out_period, "out_period")?;
        let s = &(*series).0;
        *out_period = s.period();
        if cap < s.period() || cycle.is_null() {
            return Err(fail(
                BlStatus::BufferTooSmall,
                format!("cycle buffer needs {} entries", s.period()),
            ));
        }
        let info = lib(s.detect_period(tol))?;
        *out_t1 = info.t1;
        std::slice::from_raw_parts_mut(cycle, info.log_cycle.len()).copy_from_slice(&info.log_cycle);
        Ok(())
    })
}

/// Defaults for an FMM run with a Pareto(1) tail.
#[no_mangle]
pub unsafe extern "C" fn bl_sim_params_default(out: *mut BlSimParams) -> BlStatus {
    guard(|| {
        non_null(out, "out")?;
        let c = SimConfig::new(Model::Fmm, lib(TailModel::pareto(1.0))?, 0.1, 20.0, 40, 1);
        *out = BlSimParams {
            model: BlModel::Fmm,
            tail_alpha: c.tail.alpha(),
            tail_gamma: 0.0,
            beta: c.beta,
            log_f: c.log_f,
            t_max: c.t_max,
            seed: c.seed,
            exact_event_cap: c.exact_event_cap,
            mmm_bins_per_decade: c.mmm_bins_per_decade,
            mmm_poisson_threshold: c.mmm_poisson_threshold,
            restart_on_extinction: c.restart_on_extinction,
        };
        Ok(())
    })
}

fn sim_config(p: &BlSimParams) -> Result<SimConfig, BlStatus> {
    let tail = if p.tail_gamma == 0.0 {
        lib(TailModel::pareto(p.tail_alpha))?
    } else {
        lib(TailModel::pareto_log(p.tail_alpha, p.tail_gamma))?
    };
    let model = match p.model {
        BlModel::Fmm => Model::Fmm,
        BlModel::Mmm => Model::Mmm,
    };
    let mut c = SimConfig::new(model, tail, p.beta, p.log_f, p.t_max, p.seed);
    c.exact_event_cap = p.exact_event_cap;
    c.mmm_bins_per_decade = p.mmm_bins_per_decade;
    c.mmm_poisson_threshold = p.mmm_poisson_threshold;
    c.restart_on_extinction = p.restart_on_extinction;
    Ok(c)
}

/// Runs one replicate.
#[no_mangle]
pub unsafe extern "C" fn bl_sim_run(params: *const BlSimParams, out: *mut *mut BlRunRecord) -> BlStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        let record = lib(run(&sim_config(&*params)?))?;
        *out = Box::into_raw(Box::new(BlRunRecord(record)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bl_run_free(record: *mut BlRunRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}

/// Number of recorded generations, including generation 0.
#[no_mangle]
pub unsafe extern "C" fn bl_run_len(record: *const BlRunRecord) -> usize {
    record.as_ref().map_or(0, |r| r.0.rows.len())
}

#[no_mangle]
pub unsafe extern "C" fn bl_run_restarts(record: *const BlRunRecord) -> u64 {
    record.as_ref().map_or(0, |r| r.0.restarts)
}

#[no_mangle]
pub unsafe extern "C" fn bl_run_survived(record: *const BlRunRecord) -> bool {
    record.as_ref().is_some_and(|r| r.0.survived())
}

unsafe fn row_value(
    record: *const BlRunRecord,
    t: usize,
    out: *mut f64,
    pick: fn(&branchlab::sim::GenerationRow) -> f64,
) -> BlStatus {
    guard(|| {
        non_null(record, "record")?;
        non_null(out, "out")?;
        let r = &(*record).0;
        let row = r
            .row(t)
            .ok_or_else(|| fail(BlStatus::OutOfRange, format!("generation {t} not recorded")))?;
        *out = pick(row);
        Ok(())
    })
}

/// `log X(t)`.
#[no_mangle]
pub unsafe extern "C" fn bl_run_log_x(record: *const BlRunRecord, t: usize, out: *mut f64) -> BlStatus {
    row_value(record, t, out, |r| r.log_x)
}

/// Log-fitness of the fittest mutant of generation `t` (`-inf` if none).
#[no_mangle]
pub unsafe extern "C" fn bl_run_log_w(record: *const BlRunRecord, t: usize, out: *mut f64) -> BlStatus {
    row_value(record, t, out, |r| r.log_w)
}

/// Parses a tail spec such as `pareto:alpha=1` and evaluates `log G`.
#[no_mangle]
pub unsafe extern "C" fn bl_tail_log_tail(spec: *const c_char, log_x: f64, out: *mut f64) -> BlStatus {
    guard(|| {
        non_null(spec, "spec")?;
        non_null(out, "out")?;
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| fail(BlStatus::Parse, "tail spec is not UTF-8"))?;
        let tail: TailModel = lib(text.parse())?;
        *out = tail.log_tail(log_x);
        Ok(())
    })
}
