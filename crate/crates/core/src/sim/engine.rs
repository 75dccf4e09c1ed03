use serde::Serialize;

use super::mutants::{sample_fittest_mutant, step_mmm_spectrum};
use super::poisson::sample_poisson;
use super::state::{Class, ClassCount, Mode, PopulationState, LOGDET_MIN_LOG_COUNT};
use super::{Model, SimConfig, Streams, MAX_RESTARTS};
use crate::error::{Error, Result};

/// One exact generation: Poisson-thinned non-mutant offspring per class,
/// a Poisson number of mutants, and either the fittest (FMM) or all of
/// them (MMM) added as new classes.
///
/// Fails with [`Error::CapExceeded`] when the expected offspring number
/// exceeds the cap; the caller then switches to [`step_logdet`].
pub fn step_exact(state: &PopulationState, cfg: &SimConfig, streams: &mut Streams) -> Result<PopulationState> {
    debug_assert_eq!(state.mode, Mode::Exact);
    let next_t = state.t + 1;
    if state.is_extinct() {
        return Ok(PopulationState::from_classes(next_t, Mode::Exact, vec![], f64::NEG_INFINITY));
    }
    if state.log_fitsum > cfg.exact_event_cap.ln() {
        return Err(Error::CapExceeded {
            expected: state.log_fitsum.exp(),
            cap: cfg.exact_event_cap,
        });
    }
    let log_keep = (-cfg.beta).ln_1p();
    let mut classes: Vec<Class> = Vec::with_capacity(state.classes.len() + 1);
    for c in &state.classes {
        let mean = (log_keep + c.count.log() + c.log_fitness).exp();
        let survivors = sample_poisson(&mut streams.bulk, mean);
        if survivors > 0 {
            classes.push(Class {
                count: ClassCount::Exact(survivors),
                ..*c
            });
        }
    }
    let mutants = sample_poisson(&mut streams.bulk, cfg.beta * state.log_fitsum.exp());
    let mut log_w = f64::NEG_INFINITY;
    if mutants > 0 {
        match cfg.model {
            Model::Fmm => {
                log_w = cfg.tail.sample_max_of_n(mutants, &mut streams.top)?;
                classes.push(Class {
                    log_fitness: log_w,
                    count: ClassCount::Exact(1),
                    born: next_t,
                });
            }
            Model::Mmm => {
                for _ in 0..mutants {
                    let w = cfg.tail.sample_fitness(&mut streams.bulk)?;
                    log_w = log_w.max(w);
                    classes.push(Class {
                        log_fitness: w,
                        count: ClassCount::Exact(1),
                        born: next_t,
                    });
                }
            }
        }
    }
    Ok(PopulationState::from_classes(next_t, Mode::Exact, classes, log_w))
}

/// One generation of expectation dynamics in log domain:
/// `log n' = log(1 - beta) + log n + log F`, plus a stochastic mutant cohort.
pub fn step_logdet(state: &PopulationState, cfg: &SimConfig, streams: &mut Streams) -> Result<PopulationState> {
    debug_assert_eq!(state.mode, Mode::LogDet);
    let next_t = state.t + 1;
    let log_keep = (-cfg.beta).ln_1p();
    let mut classes: Vec<Class> = state
        .classes
        .iter()
        .filter_map(|c| {
            let log_n = log_keep + c.count.log() + c.log_fitness;
            (log_n >= LOGDET_MIN_LOG_COUNT).then_some(Class {
                count: ClassCount::Log(log_n),
                ..*c
            })
        })
        .collect();
    let log_lambda = cfg.beta.ln() + state.log_fitsum;
    let log_w = match cfg.model {
        Model::Fmm => {
            let w = sample_fittest_mutant(log_lambda, &cfg.tail, &mut streams.top)?;
            if w.is_finite() {
                classes.push(Class {
                    log_fitness: w,
                    count: ClassCount::Log(0.0),
                    born: next_t,
                });
            }
            w
        }
        Model::Mmm => {
            let (cohort, w) = step_mmm_spectrum(log_lambda, cfg, next_t, streams)?;
            classes.extend(cohort);
            w
        }
    };
    Ok(PopulationState::from_classes(next_t, Mode::LogDet, classes, log_w))
}

/// Per-generation observables of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationRow {
    pub t: usize,
    pub log_x: f64,
    pub log_w: f64,
    pub n_classes: usize,
    pub mode: Mode,
    pub dominant_age: Option<usize>,
}

impl GenerationRow {
    fn of(state: &PopulationState) -> Self {
        Self {
            t: state.t,
            log_x: state.log_x,
            log_w: state.log_w,
            n_classes: state.classes.len(),
            mode: state.mode,
            dominant_age: state.dominant_age(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "t", rename_all = "lowercase")]
pub enum Outcome {
    Survived(usize),
    Extinct(usize),
}

/// Time series of one run, from generation 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub rows: Vec<GenerationRow>,
    pub outcome: Outcome,
    pub restarts: u64,
    /// First generation computed in log-deterministic mode.
    pub switch_t: Option<usize>,
}

impl RunRecord {
    pub fn survived(&self) -> bool {
        matches!(self.outcome, Outcome::Survived(_))
    }

    pub fn row(&self, t: usize) -> Option<&GenerationRow> {
        self.rows.get(t).filter(|r| r.t == t)
    }

    pub fn log_x(&self, t: usize) -> Option<f64> {
        self.row(t).map(|r| r.log_x)
    }

    pub fn log_w(&self, t: usize) -> Option<f64> {
        self.row(t).map(|r| r.log_w)
    }
}

fn attempt(cfg: &SimConfig, seed: u64) -> Result<RunRecord> {
    let mut streams = Streams::new(seed);
    let mut state = PopulationState::founder(cfg.log_f);
    let mut rows = Vec::with_capacity(cfg.t_max + 1);
    let mut switch_t = None;
    rows.push(GenerationRow::of(&state));
    for _ in 0..cfg.t_max {
        state = match state.mode {
            Mode::Exact => match step_exact(&state, cfg, &mut streams) {
                Ok(next) => next,
                Err(Error::CapExceeded { .. }) => {
                    switch_t = Some(state.t + 1);
                    step_logdet(&state.to_logdet(), cfg, &mut streams)?
                }
                Err(e) => return Err(e),
            },
            Mode::LogDet => step_logdet(&state, cfg, &mut streams)?,
        };
        rows.push(GenerationRow::of(&state));
        if state.is_extinct() {
            return Ok(RunRecord {
                rows,
                outcome: Outcome::Extinct(state.t),
                restarts: 0,
                switch_t,
            });
        }
    }
    Ok(RunRecord {
        rows,
        outcome: Outcome::Survived(state.t),
        restarts: 0,
        switch_t,
    })
}

/// Runs one replicate to `t_max`.
///
/// With `restart_on_extinction` an extinct attempt is discarded and the
/// run restarts from the founder with seed `seed + k` for the `k`-th
/// restart, which conditions on survival.
pub fn run(cfg: &SimConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let mut restarts = 0u64;
    loop {
        let mut record = attempt(cfg, cfg.seed.wrapping_add(restarts))?;
        if record.survived() || !cfg.restart_on_extinction {
            record.restarts = restarts;
            return Ok(record);
        }
        restarts += 1;
        if restarts > MAX_RESTARTS {
            return Err(Error::TooManyRestarts { restarts });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail::TailModel;

    fn cfg(model: Model, beta: f64, log_f: f64, t_max: usize) -> SimConfig {
        SimConfig::new(model, TailModel::pareto(1.0).unwrap(), beta, log_f, t_max, 5)
    }

    #[test]
    fn empty_population_stays_empty() {
        let c = cfg(Model::Mmm, 0.5, 0.0, 3);
        let empty = PopulationState::from_classes(4, Mode::Exact, vec![], f64::NEG_INFINITY);
        let next = step_exact(&empty, &c, &mut Streams::new(1)).unwrap();
        assert!(next.is_extinct());
        assert_eq!(next.t, 5);
        assert_eq!(next.log_w, f64::NEG_INFINITY);
    }

    #[test]
    fn exact_mean_offspring_mmm() {
        // F = 4, beta = 0.5: next generation has Poisson(2) + Poisson(2) individuals
        let c = cfg(Model::Mmm, 0.5, 4f64.ln(), 1);
        let founder = PopulationState::founder(4f64.ln());
        let mut streams = Streams::new(77);
        let n = 20_000;
        let total: u64 = (0..n)
            .map(|_| step_exact(&founder, &c, &mut streams).unwrap().total_exact().unwrap())
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 4.0).abs() < 5.0 * (4.0 / n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn fmm_without_mutants_records_neg_inf() {
        let c = cfg(Model::Fmm, 1e-9, 1f64.ln() + 0.1, 1);
        let founder = PopulationState::founder(c.log_f);
        let next = step_exact(&founder, &c, &mut Streams::new(2)).unwrap();
        assert_eq!(next.log_w, f64::NEG_INFINITY);
        assert!(next.classes.iter().all(|k| k.born == 0));
    }

    #[test]
    fn cap_is_signalled() {
        let mut c = cfg(Model::Fmm, 0.1, 20.0, 1);
        c.exact_event_cap = 1e7;
        let founder = PopulationState::founder(20.0);
        assert!(matches!(
            step_exact(&founder, &c, &mut Streams::new(2)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn logdet_single_class_update() {
        let c = cfg(Model::Fmm, 0.1, 30.0, 1);
        let s = PopulationState::founder(30.0).to_logdet();
        let next = step_logdet(&s, &c, &mut Streams::new(3)).unwrap();
        let founder = next.classes.iter().find(|k| k.born == 0).unwrap();
        assert!((founder.count.log() - (0.9f64.ln() + 30.0)).abs() < 1e-12);
        let lse = crate::logmath::log_sum_exp(next.classes.iter().map(|k| k.count.log()));
        assert!((next.log_x - lse).abs() < 1e-12);
    }

    #[test]
    fn logdet_fmm_mutant_scales_with_population() {
        // alpha = 1: log W = log_fitsum + log beta - log(-log U)
        let c = cfg(Model::Fmm, 0.1, 30.0, 1);
        let s = PopulationState::founder(30.0).to_logdet();
        let mut streams = Streams::new(3);
        let mut probe = streams.top.clone();
        let next = step_logdet(&s, &c, &mut streams).unwrap();
        let u: f64 = rand::Rng::sample(&mut probe, rand::distr::Open01);
        let want = 30.0 + 0.1f64.ln() - (-u.ln()).ln();
        assert!((next.log_w - want).abs() < 1e-12);
    }

    #[test]
    fn zero_horizon_keeps_founder_only() {
        let r = run(&cfg(Model::Fmm, 0.1, 5.0, 0)).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].log_x, 0.0);
        assert_eq!(r.outcome, Outcome::Survived(0));
    }

    #[test]
    fn large_founder_survives_first_try() {
        let log_f = 1e9f64.ln();
        let r = run(&cfg(Model::Fmm, 0.1, log_f, 3)).unwrap();
        assert_eq!(r.restarts, 0);
        let x1 = r.log_x(1).unwrap();
        let want = (0.9e9f64 + 1.0).ln();
        assert!((x1 - want).abs() < 1e-3, "{x1} vs {want}");
        assert_eq!(r.switch_t, Some(1));
    }

    #[test]
    fn subcritical_founder_restarts() {
        // founder fitness 0.05: most attempts die in the first generation
        let mut c = cfg(Model::Fmm, 0.5, -3.0, 6);
        c.seed = 11;
        let r = run(&c).unwrap();
        assert!(r.restarts > 0);
        assert!(r.survived());
        c.restart_on_extinction = false;
        let mut extinct = 0;
        for seed in 0..50 {
            c.seed = seed;
            if !run(&c).unwrap().survived() {
                extinct += 1;
            }
        }
        assert!(extinct > 25);
    }

    #[test]
    fn replay_is_bit_identical() {
        let mut c = cfg(Model::Mmm, 0.2, 2.0, 12);
        c.exact_event_cap = 1e4;
        assert_eq!(run(&c).unwrap(), run(&c).unwrap());
    }

    #[test]
    fn invalid_beta_rejected() {
        assert!(run(&cfg(Model::Fmm, 1.5, 1.0, 2)).is_err());
    }
}
