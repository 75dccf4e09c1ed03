use branchlab::logmath::log_sum_exp;
use branchlab::sim::{
    expected_spectrum, fittest_mutant_from_uniform, heuristic_wt, replica_seed, run, run_replicas,
    sample_fittest_mutant, sample_poisson, ClassCount, Mode, Model, PopulationState, SimConfig, Streams,
    step_exact, step_logdet,
};
use branchlab::stats::ks_two_sample;
use branchlab::TailModel;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pareto(alpha: f64) -> TailModel {
    TailModel::pareto(alpha).unwrap()
}

proptest! {
    #[test]
    fn fittest_mutant_grows_with_lambda(alpha in 0.2f64..10.0, u in 0.0001f64..0.9999, l in -5.0f64..50.0, d in 0.0f64..50.0) {
        let tail = pareto(alpha);
        let a = fittest_mutant_from_uniform(l, &tail, u).unwrap();
        let b = fittest_mutant_from_uniform(l + d, &tail, u).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn spectrum_mass_telescopes(alpha in 0.3f64..5.0, log_lambda in 0.0f64..300.0, u in 0.01f64..0.99, b in 1u32..16) {
        let tail = pareto(alpha);
        let w = fittest_mutant_from_uniform(log_lambda, &tail, u).unwrap();
        prop_assume!(w.is_finite());
        let bins = expected_spectrum(&tail, log_lambda, w, b);
        let total = log_sum_exp(bins.iter().map(|x| x.log_expected));
        prop_assert!((total - log_lambda).abs() <= 1e-9 * log_lambda.max(1.0));
        for pair in bins.windows(2) {
            prop_assert!(pair[0].hi <= pair[1].lo + 1e-12);
            prop_assert!(pair[0].representative <= w);
        }
        prop_assert!(bins.last().unwrap().is_top);
    }

    #[test]
    fn logdet_step_is_expectation_plus_cohort(log_f in 17.0f64..60.0, beta in 0.01f64..0.9, seed in any::<u64>()) {
        let cfg = SimConfig::new(Model::Fmm, pareto(1.0), beta, log_f, 1, seed);
        let s = PopulationState::founder(log_f).to_logdet();
        let next = step_logdet(&s, &cfg, &mut Streams::new(seed)).unwrap();
        prop_assert_eq!(next.mode, Mode::LogDet);
        let founder = next.classes.iter().find(|c| c.born == 0).unwrap();
        prop_assert!((founder.count.log() - ((1.0 - beta).ln() + log_f)).abs() < 1e-12);
        let lse = log_sum_exp(next.classes.iter().map(|c| c.count.log()));
        prop_assert!((next.log_x - lse).abs() < 1e-12);
    }

    #[test]
    fn exact_step_keeps_integer_counts(log_f in 0.0f64..8.0, beta in 0.01f64..0.9, seed in any::<u64>()) {
        let cfg = SimConfig::new(Model::Mmm, pareto(1.0), beta, log_f, 1, seed);
        let next = step_exact(&PopulationState::founder(log_f), &cfg, &mut Streams::new(seed)).unwrap();
        prop_assert!(next.classes.iter().all(|c| matches!(c.count, ClassCount::Exact(n) if n > 0)));
        prop_assert!(next.classes.windows(2).all(|w| w[0].log_fitness > w[1].log_fitness));
        prop_assert_eq!(next.t, 1);
    }

    #[test]
    fn runs_are_reproducible_and_modes_monotone(seed in any::<u64>(), model in prop_oneof![Just(Model::Fmm), Just(Model::Mmm)]) {
        let mut cfg = SimConfig::new(model, pareto(1.0), 0.1, 3.0, 20, seed);
        cfg.exact_event_cap = 1e5;
        let a = run(&cfg).unwrap();
        prop_assert_eq!(&a, &run(&cfg).unwrap());
        prop_assert!(a.rows.iter().enumerate().all(|(t, r)| r.t == t));
        let first_logdet = a.rows.iter().position(|r| r.mode == Mode::LogDet).unwrap_or(a.rows.len());
        prop_assert!(a.rows[first_logdet..].iter().all(|r| r.mode == Mode::LogDet));
        prop_assert!(a.survived());
    }
}

#[test]
fn heuristic_matches_exact_law_for_one_class() {
    // single class of fitness ~1: sum n F = X, so lambda = beta X / (1 - beta)
    // gives the heuristic its exact-law counterpart
    let (log_x, beta, alpha, n) = (1e6f64.ln(), 0.5, 1.0, 100_000);
    let tail = pareto(alpha);
    let mut r1 = ChaCha8Rng::seed_from_u64(21);
    let mut r2 = ChaCha8Rng::seed_from_u64(22);
    let heuristic: Vec<f64> = (0..n).map(|_| heuristic_wt(log_x, beta, alpha, &mut r1)).collect();
    let log_lambda = beta.ln() + log_x - (1.0 - beta).ln();
    let exact: Vec<f64> = (0..n)
        .map(|_| sample_fittest_mutant(log_lambda, &tail, &mut r2).unwrap())
        .collect();
    let d = ks_two_sample(&heuristic, &exact);
    assert!(d <= 0.02, "KS = {d}");
}

#[test]
fn poisson_mean_and_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for mean in [0.5, 30.0, 2e9] {
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_poisson(&mut rng, mean) as f64).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((m - mean).abs() < 5.0 * (mean / n as f64).sqrt(), "mean {m} vs {mean}");
        assert!((v / mean - 1.0).abs() < 0.05, "var {v} vs {mean}");
    }
}

#[test]
fn replica_fan_out_is_deterministic() {
    let cfg = SimConfig::new(Model::Mmm, pareto(1.0), 0.1, 20.0, 15, 99);
    let a = run_replicas(&cfg, 8, 1).unwrap();
    let b = run_replicas(&cfg, 8, 4).unwrap();
    assert_eq!(a, b);
    let mut single = cfg.clone();
    single.seed = replica_seed(99, 5);
    assert_eq!(run(&single).unwrap(), a[5]);
}

#[test]
fn paired_runs_share_the_fittest_mutant_draws() {
    // in log-deterministic mode the first mutant of both models comes from
    // the same uniform and the same lambda
    let mut cfg = SimConfig::new(Model::Fmm, pareto(1.0), 0.1, 50.0, 1, 3);
    let f = run(&cfg).unwrap();
    cfg.model = Model::Mmm;
    let m = run(&cfg).unwrap();
    assert_eq!(f.rows[1].log_w, m.rows[1].log_w);
    assert!(m.rows[1].log_x >= f.rows[1].log_x);
}

#[test]
fn mmm_bin_width_changes_little() {
    let base = SimConfig::new(Model::Mmm, pareto(1.0), 0.1, 50.0, 30, 4);
    let coarse = run(&SimConfig { mmm_bins_per_decade: 4, ..base.clone() }).unwrap();
    let fine = run(&SimConfig { mmm_bins_per_decade: 32, ..base }).unwrap();
    let (a, b) = (coarse.rows[30].log_x, fine.rows[30].log_x);
    assert!((a - b).abs() / b < 0.05, "{a} vs {b}");
}
