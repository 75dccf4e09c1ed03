//! Monte Carlo checks of two Galton-Watson tail bounds used in the growth
//! analysis. Poisson offspring are summed in one draw per generation.

use rand::Rng;
use serde::Serialize;

use super::poisson::sample_poisson;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McCheck {
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard error of `empirical`.
    pub sigma: f64,
    pub replicas: usize,
}

impl McCheck {
    fn from_hits(hits: usize, replicas: usize, bound: f64) -> Self {
        let p = hits as f64 / replicas as f64;
        Self {
            empirical: p,
            bound,
            sigma: (p * (1.0 - p) / replicas as f64).sqrt(),
            replicas,
        }
    }

    /// `empirical >= bound - 3 sigma`.
    pub fn passes(&self) -> bool {
        self.empirical >= self.bound - 3.0 * self.sigma
    }
}

/// Poisson(`theta`) Galton-Watson from one individual: estimates
/// `P(X_t >= x^t theta^t for 1 <= t <= n)` against
/// `1 - n (1-x)^-2 / (theta-1)`.
pub fn mc_verify_galton<R: Rng + ?Sized>(
    theta: f64,
    x: f64,
    n: usize,
    replicas: usize,
    rng: &mut R,
) -> Result<McCheck> {
    if !(theta > 1.0) || !(x > 0.0 && x < 1.0) || n == 0 || replicas == 0 {
        return Err(Error::Domain(format!(
            "galton check needs theta > 1, 0 < x < 1, n >= 1, replicas >= 1 (theta={theta}, x={x}, n={n})"
        )));
    }
    let bound = 1.0 - n as f64 * (1.0 - x).powi(-2) / (theta - 1.0);
    let threshold = (x * theta).ln();
    let mut hits = 0;
    for _ in 0..replicas {
        let mut pop = 1u64;
        let ok = (1..=n).all(|t| {
            pop = sample_poisson(rng, theta * pop as f64);
            pop > 0 && (pop as f64).ln() >= t as f64 * threshold
        });
        hits += ok as usize;
    }
    Ok(McCheck::from_hits(hits, replicas, bound))
}

/// Galton-Watson from `k0` individuals with Poisson offspring of mean
/// `means[t]` in generation `t`: estimates `P(X_t <= K N^t B^t)` for all
/// `t` up to `means.len()`, with `N = max(means)`, against
/// `1 - k0 / (K (B-1))`.
pub fn mc_verify_tdg<R: Rng + ?Sized>(
    means: &[f64],
    k0: u64,
    k: f64,
    b: f64,
    replicas: usize,
    rng: &mut R,
) -> Result<McCheck> {
    if !(b > 1.0) || !(k > 0.0) || replicas == 0 || means.is_empty() {
        return Err(Error::Domain(format!(
            "tdg check needs B > 1, K > 0, a nonempty mean list and replicas >= 1 (K={k}, B={b})"
        )));
    }
    if means.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
        return Err(Error::Domain("offspring means must be finite and non-negative".into()));
    }
    let n_max = means.iter().cloned().fold(0.0, f64::max);
    let bound = 1.0 - k0 as f64 / (k * (b - 1.0));
    let log_step = (n_max * b).ln();
    let mut hits = 0;
    for _ in 0..replicas {
        let mut pop = k0;
        let ok = means.iter().enumerate().all(|(i, m)| {
            pop = sample_poisson(rng, m * pop as f64);
            pop == 0 || (pop as f64).ln() <= k.ln() + (i + 1) as f64 * log_step
        });
        hits += ok as usize;
    }
    Ok(McCheck::from_hits(hits, replicas, bound))
}
