//! Command configuration shared by flags and JSON config files.
//!
//! Every option is optional at this level so that flags, the config file,
//! `BRANCHLAB_SEED` and built-in defaults can be layered field by field.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

use crate::sim::Model;
use crate::tail::TailModel;

pub const SEED_ENV: &str = "BRANCHLAB_SEED";

macro_rules! options {
    ($(#[$sm:meta])* $name:ident { $( $(#[$fm:meta])* $field:ident : $ty:ty, )* }) => {
        $(#[$sm])*
        #[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                $(#[$fm])*
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }

        impl $name {
            /// Field-wise: values set in `self` win over `base`.
            pub fn over(self, base: Self) -> Self {
                Self { $( $field: self.$field.or(base.$field), )* }
            }
        }
    };
}

options! {
    /// Growth exponent table.
    NuOpts {
        /// Single tail index; overrides the grid.
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long)]
        points: usize,
        /// Logarithmically spaced grid.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        log_grid: bool,
        /// CSV destination (stdout when absent).
        #[arg(long)]
        out: PathBuf,
    }
}

options! {
    RecurseOpts {
        #[arg(long)]
        alpha: f64,
        /// Driving sequence: linear, half, ctex:phis=a,b,..., file:PATH.
        #[arg(long)]
        seed: String,
        #[arg(long)]
        t_max: usize,
        /// Also print the eventual cycle as JSON.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        detect_period: bool,
        #[arg(long)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    }
}

options! {
    SeedCtexOpts {
        /// Cycle multipliers, comma separated; fractions such as 4/3 allowed.
        #[arg(long)]
        phis: String,
        /// Defaults to T / prod(phi).
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t_max: usize,
        #[arg(long)]
        out: PathBuf,
    }
}

options! {
    SimulateOpts {
        #[arg(long)]
        model: Model,
        /// pareto:alpha=A or paretolog:alpha=A,gamma=G.
        #[arg(long)]
        tail: TailModel,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        log_f: f64,
        #[arg(long)]
        t_max: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        replicas: usize,
        /// Worker threads, 0 for one per core.
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        exact_event_cap: f64,
        #[arg(long)]
        mmm_bins_per_decade: u32,
        #[arg(long)]
        mmm_poisson_threshold: f64,
        /// Restart extinct runs (conditioning on survival).
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        restart: bool,
        /// First generation of the growth-rate fit.
        #[arg(long)]
        slope_lo: usize,
        #[arg(long)]
        slope_hi: usize,
        /// Output directory; only the summary is printed when absent.
        #[arg(long)]
        out: PathBuf,
    }
}

options! {
    FreqOpts {
        /// recursion or run.
        #[arg(long)]
        from: String,
        #[arg(long)]
        alpha: f64,
        /// Generations, comma separated.
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        /// Recursion driving sequence.
        #[arg(long)]
        init: String,
        #[arg(long)]
        model: Model,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        log_f: f64,
        #[arg(long)]
        seed: u64,
        /// CSV `t,i,J,R` destination.
        #[arg(long)]
        out: PathBuf,
        /// CSV `t,P` destination.
        #[arg(long)]
        p_out: PathBuf,
    }
}

options! {
    CollapseOpts {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        init: String,
        /// Pairs `a:b`, comma separated.
        #[arg(long)]
        t_pairs: String,
        /// Also report the distance of each `a` to the homogeneous curve.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        curve: bool,
        #[arg(long)]
        out: PathBuf,
    }
}

options! {
    VerifyOpts {
        #[arg(long)]
        replicas: usize,
        #[arg(long)]
        seed: u64,
        /// Draws per fittest-mutant law check.
        #[arg(long)]
        ks_draws: usize,
    }
}

/// Full configuration of one invocation. Serialized with a `command` tag.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Config {
    /// Growth exponent table: CSV `alpha,T,nu,nu_approx,rel_err`.
    Nu(NuOpts),
    /// Solve the recursion: CSV `t,log_chi,I_t,log_c_t,nu_hat`; with
    /// --detect-period a JSON line `{t1, cycle, phi, constraints_ok}` follows.
    Recurse(RecurseOpts),
    /// Constructive seed from a multiplier cycle: CSV `t,log_a,log_chi`
    /// then a JSON verification line. Exit 1 if the induction check fails.
    SeedCtex(SeedCtexOpts),
    /// Stochastic runs: per-run CSV `t,log_X,log_W,n_classes,mode,dominant_age`
    /// (run_NNNN.csv) and summary.json in --out.
    Simulate(SimulateOpts),
    /// Frequency snapshots: CSV `t,i,J,R` and CSV `t,P`.
    Freq(FreqOpts),
    /// Data-collapse distances: CSV `t_a,t_b,distance,compared,skipped`.
    Collapse(CollapseOpts),
    /// Monte Carlo lemma checks: CSV `check,empirical,bound,sigma,pass`.
    /// Exit 1 if any check fails.
    VerifyLemmas(VerifyOpts),
}

impl Config {
    pub fn name(&self) -> &'static str {
        match self {
            Config::Nu(_) => "nu",
            Config::Recurse(_) => "recurse",
            Config::SeedCtex(_) => "seed-ctex",
            Config::Simulate(_) => "simulate",
            Config::Freq(_) => "freq",
            Config::Collapse(_) => "collapse",
            Config::VerifyLemmas(_) => "verify-lemmas",
        }
    }

    /// Layers `self` (flags) over `file`; both must be the same command.
    pub fn over(self, file: Config) -> Result<Config, String> {
        Ok(match (self, file) {
            (Config::Nu(a), Config::Nu(b)) => Config::Nu(a.over(b)),
            (Config::Recurse(a), Config::Recurse(b)) => Config::Recurse(a.over(b)),
            (Config::SeedCtex(a), Config::SeedCtex(b)) => Config::SeedCtex(a.over(b)),
            (Config::Simulate(a), Config::Simulate(b)) => Config::Simulate(a.over(b)),
            (Config::Freq(a), Config::Freq(b)) => Config::Freq(a.over(b)),
            (Config::Collapse(a), Config::Collapse(b)) => Config::Collapse(a.over(b)),
            (Config::VerifyLemmas(a), Config::VerifyLemmas(b)) => Config::VerifyLemmas(a.over(b)),
            (a, b) => {
                return Err(format!(
                    "config file is for `{}`, not `{}`",
                    b.name(),
                    a.name()
                ))
            }
        })
    }

    /// Fills unset seeds from `env_seed`, then everything else from the
    /// built-in defaults.
    pub fn with_defaults(self, env_seed: Option<u64>) -> Config {
        let seed = |s: Option<u64>, default: u64| s.or(env_seed).or(Some(default));
        match self {
            Config::Nu(o) => Config::Nu(o.over(NuOpts {
                alpha_min: Some(0.05),
                alpha_max: Some(50.0),
                points: Some(200),
                log_grid: Some(false),
                ..Default::default()
            })),
            Config::Recurse(o) => Config::Recurse(o.over(RecurseOpts {
                seed: Some("linear".into()),
                t_max: Some(400),
                detect_period: Some(false),
                tol: Some(crate::chi::PERIOD_TOL),
                ..Default::default()
            })),
            Config::SeedCtex(o) => Config::SeedCtex(o.over(SeedCtexOpts {
                t_max: Some(200),
                ..Default::default()
            })),
            Config::Simulate(o) => {
                let s = seed(o.seed, 1);
                let t_max = o.t_max.unwrap_or(40);
                Config::Simulate(o.over(SimulateOpts {
                    model: Some(Model::Fmm),
                    tail: TailModel::pareto(1.0).ok(),
                    beta: Some(0.1),
                    log_f: Some(20.0),
                    t_max: Some(t_max),
                    seed: s,
                    replicas: Some(1),
                    jobs: Some(0),
                    exact_event_cap: Some(1e7),
                    mmm_bins_per_decade: Some(8),
                    mmm_poisson_threshold: Some(1e4),
                    restart: Some(true),
                    slope_lo: Some((t_max * 5).div_ceil(8)),
                    slope_hi: Some(t_max),
                    out: None,
                }))
            }
            Config::Freq(o) => {
                let s = seed(o.seed, 1);
                Config::Freq(o.over(FreqOpts {
                    from: Some("recursion".into()),
                    init: Some("linear".into()),
                    model: Some(Model::Fmm),
                    beta: Some(0.1),
                    log_f: Some(50.0),
                    seed: s,
                    ..Default::default()
                }))
            }
            Config::Collapse(o) => Config::Collapse(o.over(CollapseOpts {
                init: Some("linear".into()),
                curve: Some(false),
                ..Default::default()
            })),
            Config::VerifyLemmas(o) => {
                let s = seed(o.seed, 7);
                Config::VerifyLemmas(o.over(VerifyOpts {
                    replicas: Some(10_000),
                    seed: s,
                    ks_draws: Some(100_000),
                }))
            }
        }
    }
}

pub fn to_json(cfg: &Config) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

pub fn from_json(text: &str) -> Result<Config, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file_and_file_over_env() {
        let file = Config::Recurse(RecurseOpts {
            alpha: Some(2.0),
            t_max: Some(100),
            ..Default::default()
        });
        let flags = Config::Recurse(RecurseOpts {
            t_max: Some(500),
            ..Default::default()
        });
        match flags.over(file).unwrap().with_defaults(None) {
            Config::Recurse(o) => {
                assert_eq!(o.alpha, Some(2.0));
                assert_eq!(o.t_max, Some(500));
                assert_eq!(o.seed.as_deref(), Some("linear"));
            }
            _ => unreachable!(),
        }
        let sim = Config::Simulate(SimulateOpts {
            seed: Some(3),
            ..Default::default()
        });
        match sim.with_defaults(Some(9)) {
            Config::Simulate(o) => assert_eq!(o.seed, Some(3)),
            _ => unreachable!(),
        }
        match Config::VerifyLemmas(VerifyOpts::default()).with_defaults(Some(9)) {
            Config::VerifyLemmas(o) => assert_eq!(o.seed, Some(9)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn mismatched_command_rejected() {
        let a = Config::Nu(NuOpts::default());
        let b = Config::Collapse(CollapseOpts::default());
        assert!(a.over(b).is_err());
    }

    #[test]
    fn json_rejects_unknown_keys() {
        assert!(from_json(r#"{"command":"nu","alpha":1.0}"#).is_ok());
        assert!(from_json(r#"{"command":"nu","alpah":1.0}"#).is_err());
        assert!(from_json(r#"{"command":"nope"}"#).is_err());
    }

    #[test]
    fn populated_config_round_trips() {
        let cfg = Config::Simulate(SimulateOpts::default()).with_defaults(None);
        let text = to_json(&cfg);
        assert_eq!(from_json(&text).unwrap(), cfg);
        assert_eq!(to_json(&from_json(&text).unwrap()), text);
    }
}
