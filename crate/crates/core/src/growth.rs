//! The double-exponential growth exponent `nu(alpha)` and its horizon `T`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance used to decide `alpha == alpha_T`.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

/// Growth law for one tail index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthLaw {
    pub alpha: f64,
    pub period: usize,
    pub nu: f64,
    pub is_critical: bool,
}

impl GrowthLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        let period = period_t(alpha)?;
        Ok(Self {
            alpha,
            period,
            nu: nu_for_period(alpha, period),
            is_critical: (alpha.ln() - log_alpha_critical(period)).abs()
                <= CRITICAL_REL_TOL * alpha.ln().abs().max(1.0),
        })
    }
}

/// `log alpha_T = (T+1) log T - T log(T+1)`.
pub fn log_alpha_critical(period: usize) -> f64 {
    let t = period as f64;
    (t + 1.0) * t.ln() - t * (t + 1.0).ln()
}

/// `alpha_T = T^(T+1) / (T+1)^T`, evaluated through logarithms.
pub fn alpha_critical(period: usize) -> f64 {
    log_alpha_critical(period).exp()
}

/// The unique `T >= 1` with `alpha_{T-1} < alpha <= alpha_T`.
///
/// The right end of each bracket is inclusive up to `CRITICAL_REL_TOL`.
pub fn period_t(alpha: f64) -> Result<usize> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let log_alpha = alpha.ln();
    let slack = CRITICAL_REL_TOL * log_alpha.abs().max(1.0);
    let mut period = 1;
    while log_alpha > log_alpha_critical(period) + slack {
        period += 1;
    }
    Ok(period)
}

fn nu_for_period(alpha: f64, period: usize) -> f64 {
    let t = period as f64;
    (t.ln() - alpha.ln()) / t
}

/// `nu(alpha) = (1/T) log(T / alpha)`.
pub fn nu(alpha: f64) -> Result<f64> {
    Ok(nu_for_period(alpha, period_t(alpha)?))
}

/// Maximum of `(1/m) log(m/alpha)` over `1 <= m <= m_max` and every `m`
/// attaining it (ties within `CRITICAL_REL_TOL`).
///
/// The answer equals `nu(alpha)` only when `m_max >= T`.
pub fn nu_bruteforce(alpha: f64, m_max: usize) -> (f64, Vec<usize>) {
    let values: Vec<f64> = (1..=m_max.max(1)).map(|m| nu_for_period(alpha, m)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = CRITICAL_REL_TOL * best.abs().max(f64::MIN_POSITIVE);
    let argmax = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| best - v <= slack)
        .map(|(i, _)| i + 1)
        .collect();
    (best, argmax)
}

/// Continuous relaxation: `1/(e alpha)` if `alpha e >= 1`, else `-log alpha`.
pub fn nu_continuous_approx(alpha: f64) -> f64 {
    if alpha * std::f64::consts::E >= 1.0 {
        1.0 / (std::f64::consts::E * alpha)
    } else {
        -alpha.ln()
    }
}

/// One row of the `nu` sweep CSV.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NuRow {
    pub alpha: f64,
    #[serde(rename = "T")]
    pub period: usize,
    pub nu: f64,
    pub nu_approx: f64,
    pub rel_err: f64,
}

/// Evaluates the growth law and its continuous approximation on a grid.
pub fn sweep(alphas: &[f64]) -> Result<Vec<NuRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let law = GrowthLaw::new(alpha)?;
            let nu_approx = nu_continuous_approx(alpha);
            Ok(NuRow {
                alpha,
                period: law.period,
                nu: law.nu,
                nu_approx,
                rel_err: nu_approx / law.nu - 1.0,
            })
        })
        .collect()
}

/// `points` values spaced linearly or logarithmically over `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, points: usize, log_spaced: bool) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| {
            let s = k as f64 / last;
            if log_spaced {
                (lo.ln() + s * (hi.ln() - lo.ln())).exp()
            } else {
                lo + s * (hi - lo)
            }
        })
        .collect()
}
