use rand::distr::Open01;
use rand::Rng;
use serde::Serialize;

use super::poisson::sample_poisson;
use super::state::{Class, ClassCount};
use super::{SimConfig, Streams};
use crate::error::Result;
use crate::logmath::log_sub_exp;
use crate::tail::TailModel;

/// Lowest positive edge of the MMM log-fitness grid. Bin edges are
/// `0` and `GRID_FLOOR_LOG_FITNESS * 10^(k / bins_per_decade)`, `k >= 0`.
pub const GRID_FLOOR_LOG_FITNESS: f64 = 1e-2;

/// Fittest-mutant log-fitness from a uniform `u`, given
/// `log_lambda = log(beta * sum n_i F_i)`.
///
/// Returns `-inf` with probability `exp(-lambda)` (no mutant); otherwise
/// solves `G(w) = -log(u) / lambda`, so `P(W <= x) = exp(-lambda G(x))`.
pub fn fittest_mutant_from_uniform(log_lambda: f64, tail: &TailModel, u: f64) -> Result<f64> {
    let e = (-u.ln()).ln();
    if log_lambda == f64::NEG_INFINITY || e >= log_lambda {
        return Ok(f64::NEG_INFINITY);
    }
    tail.inverse_log_tail(e - log_lambda)
}

pub fn sample_fittest_mutant<R: Rng + ?Sized>(
    log_lambda: f64,
    tail: &TailModel,
    rng: &mut R,
) -> Result<f64> {
    let u: f64 = rng.sample(Open01);
    fittest_mutant_from_uniform(log_lambda, tail, u)
}

/// Large-population approximation `W = X^(1/alpha) Y` with
/// `Y = ((1-beta)/beta * log(1/z))^(-1/alpha)`, in log form. Pareto tails only.
pub fn heuristic_wt_from_uniform(log_x: f64, beta: f64, alpha: f64, z: f64) -> f64 {
    let log_y_pow = ((1.0 - beta) / beta).ln() + (-z.ln()).ln();
    (log_x - log_y_pow) / alpha
}

pub fn heuristic_wt<R: Rng + ?Sized>(log_x: f64, beta: f64, alpha: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(Open01);
    heuristic_wt_from_uniform(log_x, beta, alpha, z)
}

/// One bin of the MMM mutant spectrum over log-fitness `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumBin {
    pub lo: f64,
    pub hi: f64,
    /// Log of the expected number of mutants in the bin.
    pub log_expected: f64,
    /// Log-fitness assigned to the bin's mutants.
    pub representative: f64,
    /// The bin `(W*, inf)` represented by the fittest mutant itself.
    pub is_top: bool,
}

/// `log(lambda * (G(a) - G(b)))` for log-fitness edges `a < b`.
pub fn bin_log_expected(tail: &TailModel, log_lambda: f64, a: f64, b: f64) -> f64 {
    let hi = tail.log_tail(a);
    let lo = if b == f64::INFINITY { f64::NEG_INFINITY } else { tail.log_tail(b) };
    log_lambda + log_sub_exp(hi, lo)
}

fn grid_edge(k: usize, bins_per_decade: u32) -> f64 {
    GRID_FLOOR_LOG_FITNESS * 10f64.powf(k as f64 / bins_per_decade as f64)
}

/// Partition of `[0, inf)` in log-fitness below the fittest mutant
/// `log_w_top`, on a fixed geometric grid, closed by the top bin
/// `(log_w_top, inf)`. The expected masses telescope to `lambda`.
pub fn expected_spectrum(
    tail: &TailModel,
    log_lambda: f64,
    log_w_top: f64,
    bins_per_decade: u32,
) -> Vec<SpectrumBin> {
    let mut bins = Vec::new();
    if log_lambda == f64::NEG_INFINITY || log_w_top == f64::NEG_INFINITY {
        return bins;
    }
    let mut push = |lo: f64, hi: f64| {
        bins.push(SpectrumBin {
            lo,
            hi,
            log_expected: bin_log_expected(tail, log_lambda, lo, hi),
            representative: 0.5 * (lo + hi),
            is_top: false,
        })
    };
    let mut lo = 0.0;
    let mut k = 0;
    loop {
        let edge = grid_edge(k, bins_per_decade);
        if edge >= log_w_top {
            break;
        }
        push(lo, edge);
        lo = edge;
        k += 1;
    }
    if log_w_top > lo {
        push(lo, log_w_top);
    }
    bins.push(SpectrumBin {
        lo: log_w_top.max(0.0),
        hi: f64::INFINITY,
        log_expected: log_lambda + tail.log_tail(log_w_top),
        representative: log_w_top,
        is_top: true,
    });
    bins
}

/// Draws the MMM mutant cohort of one generation in log-deterministic mode.
///
/// The fittest mutant is sampled exactly (top stream); bins below it carry
/// a deterministic log-count when their expectation exceeds
/// `mmm_poisson_threshold` and a Poisson count otherwise (bulk stream).
/// Returns the classes and the fittest log-fitness (`-inf` if none).
pub fn step_mmm_spectrum(
    log_lambda: f64,
    cfg: &SimConfig,
    born: usize,
    streams: &mut Streams,
) -> Result<(Vec<Class>, f64)> {
    let log_w = sample_fittest_mutant(log_lambda, &cfg.tail, &mut streams.top)?;
    let log_threshold = cfg.mmm_poisson_threshold.ln();
    let mut classes = Vec::new();
    for bin in expected_spectrum(&cfg.tail, log_lambda, log_w, cfg.mmm_bins_per_decade) {
        let count = if bin.is_top {
            Some(0.0)
        } else if bin.log_expected > log_threshold {
            Some(bin.log_expected)
        } else {
            match sample_poisson(&mut streams.bulk, bin.log_expected.exp()) {
                0 => None,
                k => Some((k as f64).ln()),
            }
        };
        if let Some(log_count) = count {
            classes.push(Class {
                log_fitness: bin.representative,
                count: ClassCount::Log(log_count),
                born,
            });
        }
    }
    Ok((classes, log_w))
}
