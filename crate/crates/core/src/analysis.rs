//! Frequency-distribution observables `J_i`, `R_i`, `P(t)`, data-collapse
//! distances and growth-rate fits.
//!
//! For a generation `t`, class `i` has normalized log-fitness `J_i` and
//! normalized log-size `R_i` (0 for the dominant class, -1 for a class of
//! size one). `P(t)` is the normalized mean log-fitness.

use serde::Serialize;

use crate::chi::ChiSeries;
use crate::error::{Error, Result};
use crate::sim::RunRecord;
use crate::stats::ols_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Recursion,
    Simulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreqPoint {
    /// Birth generation of the class.
    pub i: usize,
    pub j: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreqSnapshot {
    pub t: usize,
    /// In increasing `i`.
    pub points: Vec<FreqPoint>,
    /// `None` when generation `t + 1` is unavailable.
    pub p: Option<f64>,
    pub source: Source,
}

impl FreqSnapshot {
    pub fn max_r(&self) -> Option<&FreqPoint> {
        self.points.iter().max_by(|a, b| a.r.total_cmp(&b.r))
    }
}

/// Snapshot at `t` from the recursion: `J_i = chi_i / chi_t`,
/// `R_i = (t-i) J_i / alpha - 1` for `1 <= i < t` and
/// `P = alpha (chi_{t+1} / chi_t - 1)`.
pub fn freq_from_chi(series: &ChiSeries, t: usize) -> Result<FreqSnapshot> {
    if t == 0 || t >= series.t_max() {
        return Err(Error::Domain(format!(
            "snapshot needs 1 <= t < t_max = {}, got {t}",
            series.t_max()
        )));
    }
    let alpha = series.alpha();
    let log_t = series.log_chi(t);
    let points = (1..t)
        .map(|i| {
            let log_j = series.log_chi(i) - log_t;
            let log_size = ((t - i) as f64).ln() - alpha.ln() + series.log_chi(i);
            FreqPoint {
                i,
                j: log_j.exp(),
                r: (log_size - log_t).exp_m1(),
            }
        })
        .collect();
    let p = alpha * (series.log_chi(t + 1) - log_t).exp_m1();
    Ok(FreqSnapshot {
        t,
        points,
        p: Some(p),
        source: Source::Recursion,
    })
}

/// Snapshot at `t` from a simulation record, using the logged fittest
/// mutant of every generation: `J_i = log W_i / log W_t` and
/// `R_i = ((t-i) log W_i - log X(t)) / log X(t)` for `1 <= i <= t`.
/// Generations without a mutant of fitness above one are omitted.
///
/// `P = (log X(t+1) - log X(t)) / log W_t` when `t + 1` was recorded.
pub fn freq_from_run(record: &RunRecord, t: usize) -> Result<FreqSnapshot> {
    let row = record
        .row(t)
        .ok_or_else(|| Error::MissingHistory(format!("generation {t} not in record")))?;
    let (log_x, log_wt) = (row.log_x, row.log_w);
    if !(log_wt > 0.0) {
        return Err(Error::MissingHistory(format!("no mutant with log W > 0 at generation {t}")));
    }
    if !(log_x > 0.0) {
        return Err(Error::Domain(format!("log X({t}) must be positive")));
    }
    let points = (1..=t)
        .filter_map(|i| {
            let log_wi = record.log_w(i)?;
            (log_wi > 0.0).then(|| FreqPoint {
                i,
                j: log_wi / log_wt,
                r: ((t - i) as f64 * log_wi - log_x) / log_x,
            })
        })
        .collect();
    let p = record.log_x(t + 1).map(|next| (next - log_x) / log_wt);
    Ok(FreqSnapshot {
        t,
        points,
        p,
        source: Source::Simulation,
    })
}

/// Large-`alpha` limit `R = -e J log J - 1`.
pub fn homogeneous_curve(j: f64) -> f64 {
    -std::f64::consts::E * j * j.ln() - 1.0
}

/// `sup |R_i - h(J_i)|` over the snapshot.
pub fn curve_distance<H: Fn(f64) -> f64>(snap: &FreqSnapshot, h: H) -> f64 {
    snap.points
        .iter()
        .map(|p| (p.r - h(p.j)).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseReport {
    pub distance: f64,
    pub compared: usize,
    /// Points of the first snapshot outside the `J` range of the second.
    pub skipped: usize,
}

/// `sup |R_A - R_B(J_A)|` over the points of `a`, with `R_B` interpolated
/// piecewise-linearly in `J`.
pub fn collapse_distance(a: &FreqSnapshot, b: &FreqSnapshot) -> Result<CollapseReport> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::InsufficientOverlap {
            skipped: a.points.len(),
            total: a.points.len(),
        });
    }
    let mut curve: Vec<(f64, f64)> = b.points.iter().map(|p| (p.j, p.r)).collect();
    curve.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (lo, hi) = (curve[0].0, curve[curve.len() - 1].0);
    let mut distance: f64 = 0.0;
    let mut skipped = 0;
    for p in &a.points {
        if p.j < lo || p.j > hi {
            skipped += 1;
            continue;
        }
        distance = distance.max((p.r - interpolate(&curve, p.j)).abs());
    }
    let total = a.points.len();
    if 2 * skipped > total || skipped == total {
        return Err(Error::InsufficientOverlap { skipped, total });
    }
    Ok(CollapseReport {
        distance,
        compared: total - skipped,
        skipped,
    })
}

// `curve` sorted by x, `x` inside its range.
fn interpolate(curve: &[(f64, f64)], x: f64) -> f64 {
    let k = curve.partition_point(|p| p.0 < x);
    if curve[k].0 == x {
        return curve[k].1;
    }
    let (x0, y0) = curve[k - 1];
    let (x1, y1) = curve[k.min(curve.len() - 1)];
    if x1 == x0 {
        return y1.max(y0);
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// A trajectory whose double-exponential growth rate can be fitted.
pub trait GrowthTrajectory {
    /// The quantity regressed on `t`, which grows like `nu t`.
    fn growth_log(&self, t: usize) -> Result<f64>;
}

impl GrowthTrajectory for RunRecord {
    /// `log log X(t)`; requires `log X(t) > 1`.
    fn growth_log(&self, t: usize) -> Result<f64> {
        let log_x = self
            .log_x(t)
            .ok_or_else(|| Error::MissingHistory(format!("generation {t} not in record")))?;
        if !(log_x > 1.0) {
            return Err(Error::Domain(format!("log X({t}) = {log_x} <= 1")));
        }
        Ok(log_x.ln())
    }
}

impl GrowthTrajectory for ChiSeries {
    /// `log chi_t`.
    fn growth_log(&self, t: usize) -> Result<f64> {
        if t == 0 || t > self.t_max() {
            return Err(Error::Domain(format!("t = {t} outside 1..={}", self.t_max())));
        }
        Ok(self.log_chi(t))
    }
}

/// Least-squares slope of the growth quantity over `t_lo..=t_hi`.
pub fn loglog_slope<G: GrowthTrajectory + ?Sized>(traj: &G, t_lo: usize, t_hi: usize) -> Result<f64> {
    if t_hi <= t_lo {
        return Err(Error::Domain(format!("empty fit window [{t_lo}, {t_hi}]")));
    }
    let ts: Vec<f64> = (t_lo..=t_hi).map(|t| t as f64).collect();
    let ys = (t_lo..=t_hi)
        .map(|t| traj.growth_log(t))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ols_slope(&ts, &ys))
}
