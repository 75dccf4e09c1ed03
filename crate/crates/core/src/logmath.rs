//! Log-domain helpers shared by the recursion and the simulator.

/// `log(exp(a) + exp(b))`, exact for infinite arguments.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-sum-exp over an iterator. Empty input gives `-inf`.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let xs: Vec<f64> = values.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `log(1 - exp(x))` for `x <= 0`, switching between `ln(-expm1)` and
/// `ln_1p(-exp)` at `-ln 2`.
#[inline]
pub fn log1m_exp(x: f64) -> f64 {
    if x > 0.0 {
        return f64::NAN;
    }
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `log(exp(a) - exp(b))` for `a >= b`.
#[inline]
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + log1m_exp(b - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_naive() {
        for &(a, b) in &[(0.0, 0.0), (1.0, -3.0), (-5.0, 2.5), (10.0, 10.0)] {
            let naive = (f64::exp(a) + f64::exp(b)).ln();
            assert!((log_add_exp(a, b) - naive).abs() < 1e-14);
        }
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert_eq!(log_add_exp(800.0, 800.0), 800.0 + std::f64::consts::LN_2);
    }

    #[test]
    fn log_sum_exp_handles_huge_values() {
        let v = log_sum_exp([1e8, 1e8, 1e8 - 1000.0]);
        assert!((v - (1e8 + 2f64.ln())).abs() < 1e-6);
        assert_eq!(log_sum_exp(std::iter::empty()), f64::NEG_INFINITY);
    }

    #[test]
    fn log1m_exp_both_branches() {
        for &x in &[-1e-10, -0.1, -0.5, -1.0, -20.0] {
            let naive = (1.0 - f64::exp(x)).ln();
            let rel = ((log1m_exp(x) - naive) / naive).abs();
            assert!(rel < 1e-6, "x = {x}");
        }
        assert_eq!(log1m_exp(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn log_sub_exp_inverts_add() {
        let s = log_add_exp(3.0, 1.0);
        assert!((log_sub_exp(s, 1.0) - 3.0).abs() < 1e-13);
    }
}
