//! Log-domain solver for the max-plus recursion
//!
//! ```text
//! chi_t = max{ a_t, (t-1)/alpha chi_1, ..., 1/alpha chi_{t-1} }
//! ```
//!
//! together with the derived quantities `c_t = chi_t e^{-nu t}`, the
//! estimator `nu_hat`, detection of the eventual `T`-periodicity of `c_t`,
//! the cycle multipliers `phi_k`, and the constructive seed that realizes a
//! prescribed multiplier cycle from `t = 1`.

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{period_t, GrowthLaw};

/// Two candidates whose log values differ by less than this (relative to
/// `max(1, |value|)`) are treated as tied; the larger index wins.
pub const TIE_REL_TOL: f64 = 1e-12;
/// Default tolerance on `|log c_{t+T} - log c_t|` for period detection.
pub const PERIOD_TOL: f64 = 1e-9;
/// Full-scan audit cadence of the windowed solver.
pub const AUDIT_EVERY: usize = 128;
/// Relative tolerance for the multiplier constraints of an extracted cycle.
pub const PHI_CHECK_TOL: f64 = 1e-9;
/// Relative tolerance for the multiplier constraints accepted by the
/// constructive seed.
pub const CTEX_TOL: f64 = 1e-12;
/// Relative tolerance of the `chi_t = psi_{t+T-1}` check.
pub const INDU_TOL: f64 = 1e-11;

/// The driving sequence `a_t`, t >= 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SeedSequence {
    /// `a_t = t`.
    Linear,
    /// `a_t = t / 2`.
    Half,
    /// Seed built from a multiplier cycle by [`build_ctex_seed`].
    Ctex {
        alpha: f64,
        phi: Vec<f64>,
        #[serde(skip)]
        log_psi: Vec<f64>,
    },
    /// A finite list of positive values; `a_t = 0` beyond it.
    Explicit { values: Vec<f64> },
}

impl SeedSequence {
    /// `log a_t`; `-inf` past the end of an explicit list.
    pub fn log_a(&self, t: usize) -> f64 {
        debug_assert!(t >= 1);
        match self {
            SeedSequence::Linear => (t as f64).ln(),
            SeedSequence::Half => (t as f64 / 2.0).ln(),
            SeedSequence::Ctex { alpha, log_psi, .. } => {
                let period = log_psi.len();
                let log_alpha = alpha.ln();
                log_psi
                    .iter()
                    .enumerate()
                    .map(|(i, lp)| ((period - i + t - 1) as f64).ln() - log_alpha + lp)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            SeedSequence::Explicit { values } => values
                .get(t - 1)
                .map(|v| v.ln())
                .unwrap_or(f64::NEG_INFINITY),
        }
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Domain(
                "explicit seed needs a nonempty list of positive finite values".into(),
            ));
        }
        Ok(SeedSequence::Explicit { values })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SeedSequence::Linear => "linear",
            SeedSequence::Half => "half",
            SeedSequence::Ctex { .. } => "ctex",
            SeedSequence::Explicit { .. } => "explicit",
        }
    }
}

impl fmt::Display for SeedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSequence::Ctex { phi, .. } => {
                let parts: Vec<String> = phi.iter().map(|p| p.to_string()).collect();
                write!(f, "ctex:phis={}", parts.join(","))
            }
            SeedSequence::Explicit { values } => write!(f, "explicit[{}]", values.len()),
            other => f.write_str(other.name()),
        }
    }
}

/// Textual seed specification (`linear`, `half`, `ctex:phis=a,b,c`,
/// `file:PATH`). Ctex and file seeds are resolved later because they need
/// `alpha` or filesystem access.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedSpec {
    Linear,
    Half,
    Ctex(Vec<f64>),
    File(String),
}

impl FromStr for SeedSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "linear" => return Ok(SeedSpec::Linear),
            "half" => return Ok(SeedSpec::Half),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("ctex:") {
            let list = rest.strip_prefix("phis=").unwrap_or(rest);
            let phi = list
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<f64>>>()?;
            return Ok(SeedSpec::Ctex(phi));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(SeedSpec::File(path.to_string()));
        }
        Err(Error::Parse(format!(
            "unknown seed `{s}` (expected linear, half, ctex:phis=..., file:PATH)"
        )))
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Linear => f.write_str("linear"),
            SeedSpec::Half => f.write_str("half"),
            SeedSpec::Ctex(phi) => {
                let parts: Vec<String> = phi.iter().map(|p| p.to_string()).collect();
                write!(f, "ctex:phis={}", parts.join(","))
            }
            SeedSpec::File(p) => write!(f, "file:{p}"),
        }
    }
}

/// Parses `1.5` or a fraction such as `4/3`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Audit bookkeeping of the windowed solver.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WindowAudit {
    /// Window width the accepted solution was computed with.
    pub window: usize,
    /// Number of full-scan audits performed on the accepted solution.
    pub audits: usize,
    /// Generations at which an audit found a maximizer outside the window
    /// (each one triggered a retry with a doubled window).
    pub violations: Vec<usize>,
}

/// Solution of the recursion for `1 <= t <= t_max`, stored as `log chi_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSeries {
    pub law: GrowthLaw,
    pub seed: SeedSequence,
    log_chi: Vec<f64>,
    dominant: Vec<usize>,
    pub audit: WindowAudit,
}

/// Eventual cycle of `c_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodInfo {
    pub t1: usize,
    /// `log C_k` for `k = 1..=T`, where `C_k` is the limit of `c_{k + nT}`.
    pub log_cycle: Vec<f64>,
}

impl ChiSeries {
    pub fn alpha(&self) -> f64 {
        self.law.alpha
    }

    pub fn nu(&self) -> f64 {
        self.law.nu
    }

    pub fn period(&self) -> usize {
        self.law.period
    }

    pub fn t_max(&self) -> usize {
        self.log_chi.len()
    }

    /// `log chi_t`, 1-based.
    pub fn log_chi(&self, t: usize) -> f64 {
        self.log_chi[t - 1]
    }

    pub fn log_chi_slice(&self) -> &[f64] {
        &self.log_chi
    }

    /// `I_t`: the largest maximizing index, 0 when the seed term wins.
    pub fn dominant_index(&self, t: usize) -> usize {
        self.dominant[t - 1]
    }

    /// `log c_t = log chi_t - nu t`.
    pub fn log_c(&self, t: usize) -> f64 {
        self.log_chi(t) - self.nu() * t as f64
    }

    /// `(log chi_{t+T} - log chi_t) / T`.
    pub fn nu_hat(&self, t: usize) -> Result<f64> {
        let period = self.period();
        if t == 0 || t + period > self.t_max() {
            return Err(Error::Domain(format!(
                "nu_hat({t}) needs t + T <= t_max = {}",
                self.t_max()
            )));
        }
        Ok((self.log_chi(t + period) - self.log_chi(t)) / period as f64)
    }

    /// Smallest `t1` from which `log c_t` is `T`-periodic within `tol`.
    ///
    /// At least one full verified cycle past `t1` is required.
    pub fn detect_period(&self, tol: f64) -> Result<PeriodInfo> {
        let period = self.period();
        let n = self.t_max();
        let none = Error::NoPeriodDetected { t_max: n, period };
        if n < 2 * period + 1 {
            return Err(none);
        }
        let last_bad = (1..=n - period)
            .rev()
            .find(|&t| (self.log_c(t + period) - self.log_c(t)).abs() > tol);
        let t1 = last_bad.map_or(1, |b| b + 1);
        if n - period + 1 < t1 + period {
            return Err(none);
        }
        let log_cycle = (1..=period)
            .map(|k| {
                // largest t <= n with t = k (mod T)
                let t = n - ((n + period - k) % period);
                self.log_c(t)
            })
            .collect();
        Ok(PeriodInfo { t1, log_cycle })
    }

    /// `(min_t log c_t, max_t log c_t)`.
    pub fn check_bounds(&self) -> (f64, f64) {
        (1..=self.t_max())
            .map(|t| self.log_c(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Solves the recursion up to `t_max`.
///
/// Candidates are scanned in a trailing window of width `max(4T, 64)` plus
/// the seed term; every `AUDIT_EVERY` steps the solver checks the full
/// history. A failed audit is logged and the solve restarts with a doubled
/// window, which degenerates into the full `O(t^2)` scan once the window
/// covers `t_max`.
pub fn solve_chi(alpha: f64, seed: SeedSequence, t_max: usize) -> Result<ChiSeries> {
    if t_max == 0 {
        return Err(Error::Domain("t_max must be at least 1".into()));
    }
    let law = GrowthLaw::new(alpha)?;
    let window = (4 * law.period).max(64);
    solve_chi_with_window(law, seed, t_max, window)
}

pub(crate) fn solve_chi_with_window(
    law: GrowthLaw,
    seed: SeedSequence,
    t_max: usize,
    mut window: usize,
) -> Result<ChiSeries> {
    let alpha = law.alpha;
    let mut violations = Vec::new();
    loop {
        match solve_windowed(alpha, &seed, t_max, window) {
            Ok((log_chi, dominant, audits)) => {
                return Ok(ChiSeries {
                    law,
                    seed,
                    log_chi,
                    dominant,
                    audit: WindowAudit {
                        window,
                        audits,
                        violations,
                    },
                });
            }
            Err(t) => {
                warn!(
                    "recursion audit at t = {t}: maximizer outside window {window}, retrying with {}",
                    2 * window
                );
                violations.push(t);
                window *= 2;
            }
        }
    }
}

type Solved = (Vec<f64>, Vec<usize>, usize);

fn solve_windowed(alpha: f64, seed: &SeedSequence, t_max: usize, window: usize) -> std::result::Result<Solved, usize> {
    let log_alpha = alpha.ln();
    let ln_int: Vec<f64> = (0..=t_max).map(|k| (k as f64).ln()).collect();
    let mut log_chi = Vec::with_capacity(t_max);
    let mut dominant = Vec::with_capacity(t_max);
    let mut audits = 0;
    let term = |log_chi: &[f64], t: usize, i: usize| ln_int[t - i] - log_alpha + log_chi[i - 1];

    for t in 1..=t_max {
        let lo = if t > window { t - window } else { 1 };
        let seed_term = seed.log_a(t);
        let mut best = seed_term;
        for i in lo..t {
            best = best.max(term(&log_chi, t, i));
        }
        let mut arg = 0;
        for i in (lo..t).rev() {
            if tied(term(&log_chi, t, i), best) {
                arg = i;
                break;
            }
        }
        if lo > 1 && (t % AUDIT_EVERY == 0 || t == t_max) {
            audits += 1;
            let outside = (1..lo)
                .map(|i| term(&log_chi, t, i))
                .fold(f64::NEG_INFINITY, f64::max);
            if outside > best && !tied(outside, best) {
                return Err(t);
            }
        }
        log_chi.push(best);
        dominant.push(arg);
    }
    Ok((log_chi, dominant, audits))
}

/// Cycle multipliers `phi_k = C_k e^nu / C_{k-1}` (cyclic in `k`), checked
/// against `(T+1)/T <= phi_k <= T/(T-1)` and `prod phi_k = e^{nu T}`.
pub fn extract_phi(log_cycle: &[f64], nu: f64) -> Result<Vec<f64>> {
    let period = log_cycle.len();
    if period == 0 {
        return Err(Error::ConstraintViolation("empty cycle".into()));
    }
    let phi: Vec<f64> = (0..period)
        .map(|k| {
            let prev = log_cycle[(k + period - 1) % period];
            (log_cycle[k] + nu - prev).exp()
        })
        .collect();
    check_phi(&phi, period as f64 * nu, PHI_CHECK_TOL)?;
    Ok(phi)
}

/// Verifies the multiplier box and `sum log phi = log_product` within
/// relative tolerance `tol`.
pub fn check_phi(phi: &[f64], log_product: f64, tol: f64) -> Result<()> {
    let period = phi.len();
    let t = period as f64;
    let lower = (t + 1.0) / t;
    let upper = if period == 1 { f64::INFINITY } else { t / (t - 1.0) };
    for (k, &p) in phi.iter().enumerate() {
        if !(p.is_finite() && p >= lower * (1.0 - tol) && p <= upper * (1.0 + tol)) {
            return Err(Error::ConstraintViolation(format!(
                "phi_{} = {p} outside [{lower}, {upper}]",
                k + 1
            )));
        }
    }
    let sum: f64 = phi.iter().map(|p| p.ln()).sum();
    if (sum - log_product).abs() > tol * log_product.abs().max(1.0) {
        return Err(Error::ConstraintViolation(format!(
            "product of phi is e^{sum}, expected e^{log_product}"
        )));
    }
    Ok(())
}

/// Seed `a_t = max_{0 <= i < T} (T - i + t - 1)/alpha psi_i` with
/// `psi_i = phi_1 ... phi_i`, whose solution is exactly periodic from t = 1.
pub fn build_ctex_seed(alpha: f64, phi: &[f64]) -> Result<SeedSequence> {
    let period = period_t(alpha)?;
    if phi.len() != period {
        return Err(Error::ConstraintViolation(format!(
            "need {period} multipliers for alpha = {alpha}, got {}",
            phi.len()
        )));
    }
    check_phi(phi, (period as f64).ln() - alpha.ln(), CTEX_TOL)?;
    let mut log_psi = Vec::with_capacity(period);
    let mut acc = 0.0;
    log_psi.push(acc);
    for p in &phi[..period - 1] {
        acc += p.ln();
        log_psi.push(acc);
    }
    Ok(SeedSequence::Ctex {
        alpha,
        phi: phi.to_vec(),
        log_psi,
    })
}

/// The homogeneous cycle `phi_k = e^nu`.
pub fn homogeneous_phi(alpha: f64) -> Result<Vec<f64>> {
    let law = GrowthLaw::new(alpha)?;
    Ok(vec![law.nu.exp(); law.period])
}

/// Outcome of [`verify_indu`].
#[derive(Debug, Clone, PartialEq)]
pub struct InductionCheck {
    pub passed: bool,
    pub first_failure: Option<usize>,
    pub max_rel_err: f64,
    pub series: ChiSeries,
}

/// Solves with the constructive seed and checks `log chi_t` against
/// `sum_{j <= t+T-1} log phi_j`.
pub fn verify_indu(alpha: f64, phi: &[f64], t_max: usize) -> Result<InductionCheck> {
    let seed = build_ctex_seed(alpha, phi)?;
    let series = solve_chi(alpha, seed, t_max)?;
    let period = phi.len();
    let log_phi: Vec<f64> = phi.iter().map(|p| p.ln()).collect();
    let mut log_psi = 0.0;
    for j in 1..period {
        log_psi += log_phi[(j - 1) % period];
    }
    let mut first_failure = None;
    let mut max_rel_err: f64 = 0.0;
    for t in 1..=t_max {
        // add phi_{t+T-1}
        log_psi += log_phi[(t + period - 2) % period];
        let rel = (series.log_chi(t) - log_psi).abs() / log_psi.abs().max(1.0);
        max_rel_err = max_rel_err.max(rel);
        if rel > INDU_TOL && first_failure.is_none() {
            first_failure = Some(t);
        }
    }
    Ok(InductionCheck {
        passed: first_failure.is_none(),
        first_failure,
        max_rel_err,
        series,
    })
}
