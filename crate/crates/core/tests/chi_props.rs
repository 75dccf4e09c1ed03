use branchlab::chi::{solve_chi, verify_indu, SeedSequence};
use branchlab::growth::period_t;
use proptest::prelude::*;

/// Full double loop over all candidates in log domain, no window.
fn full_scan(alpha: f64, seed: &SeedSequence, t_max: usize) -> Vec<f64> {
    let mut l: Vec<f64> = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let mut best = seed.log_a(t);
        for i in 1..t {
            best = best.max(((t - i) as f64).ln() - alpha.ln() + l[i - 1]);
        }
        l.push(best);
    }
    l
}

fn seeds() -> impl Strategy<Value = SeedSequence> {
    prop_oneof![
        Just(SeedSequence::Linear),
        Just(SeedSequence::Half),
        prop::collection::vec(0.01f64..100.0, 1..20).prop_map(|v| SeedSequence::explicit(v).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn windowed_solver_matches_full_scan(log_alpha in -2.0f64..2.5, seed in seeds(), t_max in 1usize..400) {
        let alpha = log_alpha.exp();
        let s = solve_chi(alpha, seed.clone(), t_max).unwrap();
        let oracle = full_scan(alpha, &seed, t_max);
        for t in 1..=t_max {
            let (a, b) = (s.log_chi(t), oracle[t - 1]);
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "t = {t}: {a} vs {b}");
        }
        prop_assert!(s.audit.violations.is_empty());
    }

    #[test]
    fn dominant_index_attains_the_maximum(log_alpha in -2.0f64..2.5, t_max in 2usize..300) {
        let alpha = log_alpha.exp();
        let s = solve_chi(alpha, SeedSequence::Linear, t_max).unwrap();
        for t in 1..=t_max {
            let i = s.dominant_index(t);
            let value = if i == 0 {
                SeedSequence::Linear.log_a(t)
            } else {
                ((t - i) as f64).ln() - alpha.ln() + s.log_chi(i)
            };
            prop_assert!((value - s.log_chi(t)).abs() <= 1e-11 * s.log_chi(t).abs().max(1.0));
        }
    }

    #[test]
    fn compensated_sequence_settles_on_a_cycle(log_alpha in -1.5f64..2.0) {
        let alpha = log_alpha.exp();
        let s = solve_chi(alpha, SeedSequence::Linear, 700).unwrap();
        let (lo, hi) = s.check_bounds();
        prop_assert!(lo.is_finite() && hi.is_finite());
        let period = s.period();
        for t in 500..=700 - period {
            prop_assert!((s.log_c(t + period) - s.log_c(t)).abs() <= 1e-8, "t = {t}");
        }
    }

    #[test]
    fn constructive_seed_identity(period in 2usize..6, u in prop::collection::vec(0.0f64..1.0, 6)) {
        let t = period as f64;
        let (lo, hi) = ((t + 1.0) / t, t / (t - 1.0));
        let phi: Vec<f64> = u[..period].iter().map(|x| lo + x * (hi - lo)).collect();
        let alpha = t / phi.iter().product::<f64>();
        prop_assume!(period_t(alpha).unwrap() == period);
        let check = verify_indu(alpha, &phi, 150).unwrap();
        prop_assert!(check.passed, "max rel err {}", check.max_rel_err);
    }
}
