//! Frechet-type mutant fitness distributions.
//!
//! Every model here has support `[1, inf)` and a regularly varying tail
//! `G(x) = P(F > x) = x^-alpha l(x)`. Fitness grows double-exponentially in
//! the simulations, so the whole interface works on `log x` and `log G`.

use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_MAX_ITER: usize = 200;
const NEWTON_MAX_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailFamily {
    /// `G(x) = x^-alpha`.
    Pareto,
    /// `G(x) = x^-alpha (1 + log x)^gamma`, `|gamma| <= alpha`.
    ParetoLog,
}

/// A mutant fitness law with support minimum 1.
///
/// Serialized as its textual form, e.g. `pareto:alpha=1` or
/// `paretolog:alpha=1,gamma=0.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TailModel {
    family: TailFamily,
    alpha: f64,
    gamma: f64,
}

impl TailModel {
    pub const SUPPORT_MIN: f64 = 1.0;

    pub fn pareto(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            family: TailFamily::Pareto,
            alpha,
            gamma: 0.0,
        })
    }

    /// `|gamma| <= alpha` keeps the tail monotone on `[1, inf)`.
    pub fn pareto_log(alpha: f64, gamma: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !gamma.is_finite() || gamma.abs() > alpha {
            return Err(Error::Domain(format!(
                "paretolog requires |gamma| <= alpha, got alpha={alpha}, gamma={gamma}"
            )));
        }
        Ok(Self {
            family: TailFamily::ParetoLog,
            alpha,
            gamma,
        })
    }

    pub fn family(&self) -> TailFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `G(x)`; equal to 1 below the support minimum.
    pub fn tail(&self, x: f64) -> f64 {
        if x <= Self::SUPPORT_MIN {
            return 1.0;
        }
        match self.family {
            TailFamily::Pareto => x.powf(-self.alpha),
            TailFamily::ParetoLog => x.powf(-self.alpha) * (1.0 + x.ln()).powf(self.gamma),
        }
    }

    /// `log G(exp(log_x))`, evaluated without leaving the log domain.
    pub fn log_tail(&self, log_x: f64) -> f64 {
        if log_x <= 0.0 {
            return 0.0;
        }
        match self.family {
            TailFamily::Pareto => -self.alpha * log_x,
            TailFamily::ParetoLog => -self.alpha * log_x + self.gamma * log_x.ln_1p(),
        }
    }

    /// Solves `log_tail(y) = log_g` for `y >= 0`.
    ///
    /// Pareto is closed form. ParetoLog runs a bracketed Newton iteration
    /// with bisection fallback.
    pub fn inverse_log_tail(&self, log_g: f64) -> Result<f64> {
        if log_g.is_nan() || log_g > 0.0 {
            return Err(Error::Domain(format!(
                "inverse_log_tail needs log_g <= 0, got {log_g}"
            )));
        }
        if log_g == 0.0 {
            return Ok(0.0);
        }
        if log_g == f64::NEG_INFINITY {
            return Ok(f64::INFINITY);
        }
        match self.family {
            TailFamily::Pareto => Ok(-log_g / self.alpha),
            TailFamily::ParetoLog => self.newton_inverse(log_g),
        }
    }

    fn newton_inverse(&self, log_g: f64) -> Result<f64> {
        let h = |y: f64| self.log_tail(y) - log_g;
        let dh = |y: f64| -self.alpha + self.gamma / (1.0 + y);

        let mut lo = 0.0_f64;
        let mut hi = (-log_g / self.alpha).max(1.0);
        while h(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        let mut y = (-log_g / self.alpha).clamp(lo, hi);
        let mut iterations = 0;
        while iterations < NEWTON_MAX_ITER {
            iterations += 1;
            let r = h(y);
            if r == 0.0 {
                break;
            }
            // h is decreasing: r > 0 means y is left of the root.
            if r > 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let slope = dh(y);
            let newton = y - r / slope;
            let next = if slope < 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - y).abs() <= 1e-15 * y.max(1.0) {
                y = next;
                break;
            }
            y = next;
        }
        let residual = h(y).abs();
        if residual > NEWTON_MAX_RESIDUAL {
            return Err(Error::NonConvergence {
                log_g,
                residual,
                iterations,
            });
        }
        Ok(y)
    }

    /// Log-fitness from a uniform `u` in (0, 1] by inversion.
    pub fn fitness_from_uniform(&self, u: f64) -> Result<f64> {
        self.inverse_log_tail(u.ln())
    }

    /// Log-fitness of the maximum of `n` draws from a uniform `v` in (0, 1):
    /// `G(x) = 1 - v^(1/n)`.
    pub fn max_of_n_from_uniform(&self, n: u64, v: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("max of zero samples".into()));
        }
        let log_g = (-(v.ln() / n as f64).exp_m1()).ln();
        self.inverse_log_tail(log_g.min(0.0))
    }

    /// Draws `log F` with `F ~ mu`.
    pub fn sample_fitness<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let u: f64 = rng.sample(Open01);
        self.fitness_from_uniform(u)
    }

    /// Draws the log of the largest of `n` independent fitnesses.
    pub fn sample_max_of_n<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Result<f64> {
        let v: f64 = rng.sample(Open01);
        self.max_of_n_from_uniform(n, v)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("tail index must be positive, got {alpha}")))
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            TailFamily::Pareto => write!(f, "pareto:alpha={}", self.alpha),
            TailFamily::ParetoLog => {
                write!(f, "paretolog:alpha={},gamma={}", self.alpha, self.gamma)
            }
        }
    }
}

impl FromStr for TailModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `family:key=value,...`, got `{s}`")))?;
        let mut alpha = None;
        let mut gamma = None;
        for kv in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad parameter `{kv}` in `{s}`")))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{v}` in `{s}`")))?;
            match k.trim() {
                "alpha" => alpha = Some(value),
                "gamma" => gamma = Some(value),
                other => return Err(Error::Parse(format!("unknown tail parameter `{other}`"))),
            }
        }
        let alpha = alpha.ok_or_else(|| Error::Parse(format!("missing alpha in `{s}`")))?;
        match name.trim().to_ascii_lowercase().as_str() {
            "pareto" => {
                if gamma.is_some() {
                    return Err(Error::Parse("pareto takes no gamma".into()));
                }
                TailModel::pareto(alpha)
            }
            "paretolog" => TailModel::pareto_log(alpha, gamma.unwrap_or(0.0)),
            other => Err(Error::Parse(format!("unknown tail family `{other}`"))),
        }
    }
}

impl TryFrom<String> for TailModel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TailModel> for String {
    fn from(m: TailModel) -> String {
        m.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::E;

    #[test]
    fn tail_values() {
        let p1 = TailModel::pareto(1.0).unwrap();
        let p2 = TailModel::pareto(2.0).unwrap();
        assert_relative_eq!(p1.tail(2.0), 0.5);
        assert_eq!(p2.tail(1.0), 1.0);
        assert_eq!(p2.tail(0.3), 1.0);
        let pl = TailModel::pareto_log(1.0, 1.0).unwrap();
        assert_relative_eq!(pl.tail(E), 2.0 / E, max_relative = 1e-15);
        assert_relative_eq!(pl.tail(E), 0.7357588823428847, max_relative = 1e-15);
    }

    #[test]
    fn log_tail_values() {
        let p1 = TailModel::pareto(1.0).unwrap();
        assert_eq!(p1.log_tail(700.0), -700.0);
        assert_eq!(TailModel::pareto(2.0).unwrap().log_tail(0.0), 0.0);
        let pl = TailModel::pareto_log(1.0, -1.0).unwrap();
        assert_relative_eq!(pl.log_tail(1.0), -1.0 - 2f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn inverse_values() {
        let p2 = TailModel::pareto(2.0).unwrap();
        assert_eq!(p2.inverse_log_tail(-10.0).unwrap(), 5.0);
        assert_eq!(TailModel::pareto(1.0).unwrap().inverse_log_tail(0.0).unwrap(), 0.0);
        let pl = TailModel::pareto_log(1.0, 1.0).unwrap();
        let y = pl.inverse_log_tail(2f64.ln() - 1.0).unwrap();
        assert!((y - 1.0).abs() < 1e-12, "{y}");
        assert!(p2.inverse_log_tail(0.1).is_err());
    }

    #[test]
    fn inverse_handles_flat_start_at_gamma_equal_alpha() {
        // derivative of log_tail vanishes at log_x = 0 when gamma = alpha
        let pl = TailModel::pareto_log(0.7, 0.7).unwrap();
        for &g in &[-1e-9, -1e-3, -0.5, -50.0] {
            let y = pl.inverse_log_tail(g).unwrap();
            assert!((pl.log_tail(y) - g).abs() <= 1e-12, "g = {g}");
        }
    }

    #[test]
    fn round_trip_linear_domain() {
        let pl = TailModel::pareto_log(1.5, -0.75).unwrap();
        for k in 0..=300 {
            let log_x = k as f64 * 690.0 / 300.0; // x up to ~1e300
            let back = pl.inverse_log_tail(pl.log_tail(log_x)).unwrap();
            let x_rel = (back - log_x).exp() - 1.0;
            assert!(x_rel.abs() <= 1e-12 || (back - log_x).abs() <= 1e-12, "log_x = {log_x}");
        }
    }

    #[test]
    fn sampler_uniform_mapping() {
        let p1 = TailModel::pareto(1.0).unwrap();
        assert_relative_eq!(p1.fitness_from_uniform(0.25).unwrap(), 4f64.ln(), max_relative = 1e-15);
        assert_eq!(p1.fitness_from_uniform(1.0).unwrap(), 0.0);
        assert!(p1.fitness_from_uniform(1.0 - 1e-15).unwrap() < 1e-14);
        assert_relative_eq!(p1.max_of_n_from_uniform(2, 0.25).unwrap(), 2f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(
            p1.max_of_n_from_uniform(1, 0.3).unwrap(),
            p1.fitness_from_uniform(0.7).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn max_of_n_stable_for_huge_n() {
        // P(max <= x) = (1 - 1/x)^n; at v = 1/2, x ~ n / ln 2
        let p1 = TailModel::pareto(1.0).unwrap();
        let n = 1u64 << 40;
        let y = p1.max_of_n_from_uniform(n, 0.5).unwrap();
        assert_relative_eq!(y, (n as f64 / 2f64.ln()).ln(), max_relative = 1e-9);
    }

    #[test]
    fn empirical_tail_matches() {
        let p2 = TailModel::pareto(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| p2.sample_fitness(&mut rng).unwrap() > 4f64.ln())
            .count();
        let p = 1.0 / 16.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn parse_and_display() {
        let m: TailModel = "pareto:alpha=1.0".parse().unwrap();
        assert_eq!(m, TailModel::pareto(1.0).unwrap());
        let m: TailModel = "paretolog:alpha=1.0,gamma=0.5".parse().unwrap();
        assert_eq!(m.gamma(), 0.5);
        assert_eq!(m.to_string().parse::<TailModel>().unwrap(), m);
        assert!("pareto:alpha=-1".parse::<TailModel>().is_err());
        assert!("paretolog:alpha=1,gamma=2".parse::<TailModel>().is_err());
        assert!("gumbel:alpha=1".parse::<TailModel>().is_err());
        assert!("pareto".parse::<TailModel>().is_err());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "\"paretolog:alpha=1,gamma=0.5\"");
    }
}
