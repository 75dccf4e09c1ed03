//! Stochastic simulation of the fittest-mutant (FMM) and multiple-mutant
//! (MMM) branching models.
//!
//! A run starts with exact integer class counts and switches permanently to
//! log-domain expectation dynamics once the expected offspring number
//! exceeds [`SimConfig::exact_event_cap`]. In that regime the MMM mutant
//! spectrum is represented by fitness bins.

mod engine;
mod lemmas;
mod mutants;
mod poisson;
mod replicas;
mod state;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tail::TailModel;

pub use engine::{run, step_exact, step_logdet, GenerationRow, Outcome, RunRecord};
pub use lemmas::{mc_verify_galton, mc_verify_tdg, McCheck};
pub use mutants::{
    bin_log_expected, expected_spectrum, fittest_mutant_from_uniform, heuristic_wt,
    heuristic_wt_from_uniform, sample_fittest_mutant, step_mmm_spectrum, SpectrumBin,
    GRID_FLOOR_LOG_FITNESS,
};
pub use poisson::{sample_poisson, NORMAL_APPROX_MEAN};
pub use replicas::{replica_seed, run_replicas, splitmix64};
pub use state::{Class, ClassCount, Mode, PopulationState, LOGDET_MIN_LOG_COUNT};

/// Extinctions tolerated by [`run`] before giving up.
pub const MAX_RESTARTS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Only the fittest mutant of each generation survives.
    Fmm,
    /// Every mutant joins the population.
    Mmm,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fmm" => Ok(Model::Fmm),
            "mmm" => Ok(Model::Mmm),
            other => Err(Error::Parse(format!("unknown model `{other}` (fmm|mmm)"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Fmm => "fmm",
            Model::Mmm => "mmm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: Model,
    pub tail: TailModel,
    pub beta: f64,
    /// Log-fitness of the founding individual.
    pub log_f: f64,
    pub t_max: usize,
    pub seed: u64,
    pub exact_event_cap: f64,
    pub mmm_bins_per_decade: u32,
    pub mmm_poisson_threshold: f64,
    pub restart_on_extinction: bool,
}

impl SimConfig {
    pub fn new(model: Model, tail: TailModel, beta: f64, log_f: f64, t_max: usize, seed: u64) -> Self {
        Self {
            model,
            tail,
            beta,
            log_f,
            t_max,
            seed,
            exact_event_cap: 1e7,
            mmm_bins_per_decade: 8,
            mmm_poisson_threshold: 1e4,
            restart_on_extinction: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Domain(format!("beta must lie in (0,1), got {}", self.beta)));
        }
        if !self.log_f.is_finite() {
            return Err(Error::Domain("log_f must be finite".into()));
        }
        if !(self.exact_event_cap > 0.0) {
            return Err(Error::Domain("exact_event_cap must be positive".into()));
        }
        if self.mmm_bins_per_decade == 0 {
            return Err(Error::Domain("mmm_bins_per_decade must be positive".into()));
        }
        if !(self.mmm_poisson_threshold > 0.0) {
            return Err(Error::Domain("mmm_poisson_threshold must be positive".into()));
        }
        Ok(())
    }
}

/// Random streams owned by one run. The fittest-mutant draw uses its own
/// stream so that paired runs with the same seed share those uniforms.
#[derive(Debug, Clone)]
pub struct Streams {
    pub top: ChaCha8Rng,
    pub bulk: ChaCha8Rng,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        let mut top = ChaCha8Rng::seed_from_u64(seed);
        top.set_stream(0);
        let mut bulk = ChaCha8Rng::seed_from_u64(seed);
        bulk.set_stream(1);
        Self { top, bulk }
    }
}
