//! Small statistics helpers: Kolmogorov-Smirnov distances and least squares.

/// One-sample KS distance `sup |F_n(x) - F(x)|`. Non-finite samples are
/// placed at the ends of the order (`-inf` first, `+inf` last), which lets
/// laws with an atom at `-inf` be tested directly.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // compare at both sides of each jump so ties and atoms are handled
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j].total_cmp(&x).is_eq() {
            j += 1;
        }
        let f = cdf(x);
        let f_left = if x == f64::NEG_INFINITY { 0.0 } else { f };
        d = d.max((f_left - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.total_cmp(q));
    xb.sort_by(|p, q| p.total_cmp(q));
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = if xa[i].total_cmp(&xb[j]).is_le() { xa[i] } else { xb[j] };
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_exact_quantiles_is_half_step() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn ks_with_atom_at_minus_infinity() {
        // half the mass at -inf, the rest uniform on (0.5, 1)
        let n = 1000;
        let mut xs = vec![f64::NEG_INFINITY; n / 2];
        xs.extend((n / 2..n).map(|i| (i as f64 + 0.5) / n as f64));
        let cdf = |x: f64| if x == f64::NEG_INFINITY { 0.5 } else { x.clamp(0.5, 1.0) };
        let d = ks_distance(&xs, cdf);
        assert!((d - 0.5 / n as f64).abs() < 1e-12, "{d}");
    }

    #[test]
    fn ks_two_sample_identical_and_disjoint() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&a, &[10.0, 11.0]), 1.0);
    }

    #[test]
    fn ols_recovers_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.25 * x - 3.0).collect();
        assert!((ols_slope(&xs, &ys) - 0.25).abs() < 1e-14);
    }
}
