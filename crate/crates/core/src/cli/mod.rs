//! The `branchlab` command line.
//!
//! Option precedence: flags, then the `--config` file, then
//! `BRANCHLAB_SEED` (for seeds), then built-in defaults. Exit codes: 0 on
//! success, 1 on a failed check or runtime error, 2 on usage errors.

pub mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::analysis::{
    collapse_distance, curve_distance, freq_from_chi, freq_from_run, homogeneous_curve,
    loglog_slope, FreqSnapshot,
};
use crate::chi::{
    build_ctex_seed, extract_phi, parse_number, solve_chi, verify_indu, SeedSequence, SeedSpec,
};
use crate::error::Error;
use crate::growth::{grid, sweep};
use crate::sim::{
    mc_verify_galton, mc_verify_tdg, replica_seed, run, run_replicas, sample_fittest_mutant,
    RunRecord, SimConfig,
};
use crate::stats::ks_distance;
use crate::tail::TailModel;

pub use config::{Config, SEED_ENV};

#[derive(Debug, Parser)]
#[command(name = "branchlab", version, about = "Branching populations with Frechet-type mutation")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the fully resolved config as JSON and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Config,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values; exit 2.
    Usage(String),
    /// A verification did not pass; exit 1.
    Failed(String),
    /// Any other error; exit 1.
    Runtime(String),
    /// The reader went away (e.g. `| head`); exit 0 quietly.
    Closed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) | CliError::Runtime(_) => 1,
            CliError::Closed => 0,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::Closed => write!(f, "output closed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs the CLI on `args` (including the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match resolve(cli, env_seed).and_then(|(cfg, print)| {
        if print {
            writeln!(out, "{}", config::to_json(&cfg))?;
            Ok(())
        } else {
            dispatch(&cfg, out)
        }
    }) {
        Ok(()) => 0,
        Err(CliError::Closed) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

/// Merges flags, config file, environment and defaults, then range-checks.
pub fn resolve(cli: Cli, env_seed: Option<&str>) -> CliResult<(Config, bool)> {
    let mut cfg = cli.command;
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("--config {}: {e}", path.display())))?;
        let file = config::from_json(&text).map_err(|e| usage(format!("--config {}: {e}", path.display())))?;
        cfg = cfg.over(file).map_err(usage)?;
    }
    let env_seed = match env_seed {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("{SEED_ENV}={s} is not an unsigned integer")))?,
        ),
        None => None,
    };
    let cfg = cfg.with_defaults(env_seed);
    validate(&cfg)?;
    Ok((cfg, cli.print_config))
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| usage(format!("missing --{flag}")))
}

fn check(ok: bool, flag: &str, what: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(usage(format!("--{flag} {what}")))
    }
}

fn positive(v: Option<f64>, flag: &str) -> CliResult<()> {
    match v {
        Some(x) => check(x.is_finite() && x > 0.0, flag, "must be a positive number"),
        None => Ok(()),
    }
}

/// Range checks on a defaulted config.
pub fn validate(cfg: &Config) -> CliResult<()> {
    match cfg {
        Config::Nu(o) => {
            positive(o.alpha, "alpha")?;
            positive(o.alpha_min, "alpha-min")?;
            positive(o.alpha_max, "alpha-max")?;
            if o.alpha.is_none() {
                check(o.alpha_min < o.alpha_max, "alpha-max", "must exceed --alpha-min")?;
                check(o.points.unwrap_or(0) >= 2, "points", "must be at least 2")?;
            }
        }
        Config::Recurse(o) => {
            positive(Some(need(&o.alpha, "alpha")?), "alpha")?;
            check(o.t_max.unwrap_or(0) >= 1, "t-max", "must be at least 1")?;
            positive(o.tol, "tol")?;
            need(&o.seed, "seed")?
                .parse::<SeedSpec>()
                .map_err(|e| usage(format!("--seed: {e}")))?;
        }
        Config::SeedCtex(o) => {
            parse_phis(&need(&o.phis, "phis")?)?;
            positive(o.alpha, "alpha")?;
            check(o.t_max.unwrap_or(0) >= 1, "t-max", "must be at least 1")?;
        }
        Config::Simulate(o) => {
            let b = o.beta.unwrap_or(f64::NAN);
            check(b > 0.0 && b < 1.0, "beta", "must lie in (0, 1)")?;
            check(o.log_f.is_some_and(f64::is_finite), "log-f", "must be finite")?;
            check(o.replicas.unwrap_or(0) >= 1, "replicas", "must be at least 1")?;
            positive(o.exact_event_cap, "exact-event-cap")?;
            positive(o.mmm_poisson_threshold, "mmm-poisson-threshold")?;
            check(o.mmm_bins_per_decade.unwrap_or(0) >= 1, "mmm-bins-per-decade", "must be at least 1")?;
            let (lo, hi, t_max) = (o.slope_lo.unwrap_or(0), o.slope_hi.unwrap_or(0), o.t_max.unwrap_or(0));
            check(hi <= t_max, "slope-hi", "must not exceed --t-max")?;
            check(lo < hi || t_max < 2, "slope-lo", "must be below --slope-hi")?;
        }
        Config::Freq(o) => {
            let from = need(&o.from, "from")?;
            check(from == "recursion" || from == "run", "from", "must be recursion or run")?;
            positive(Some(need(&o.alpha, "alpha")?), "alpha")?;
            let ts = need(&o.t, "t")?;
            check(!ts.is_empty() && ts.iter().all(|&t| t >= 1), "t", "needs generations >= 1")?;
            let b = o.beta.unwrap_or(f64::NAN);
            check(b > 0.0 && b < 1.0, "beta", "must lie in (0, 1)")?;
            check(o.log_f.is_some_and(f64::is_finite), "log-f", "must be finite")?;
            need(&o.init, "init")?
                .parse::<SeedSpec>()
                .map_err(|e| usage(format!("--init: {e}")))?;
        }
        Config::Collapse(o) => {
            positive(Some(need(&o.alpha, "alpha")?), "alpha")?;
            parse_pairs(&need(&o.t_pairs, "t-pairs")?)?;
            need(&o.init, "init")?
                .parse::<SeedSpec>()
                .map_err(|e| usage(format!("--init: {e}")))?;
        }
        Config::VerifyLemmas(o) => {
            check(o.replicas.unwrap_or(0) >= 1, "replicas", "must be at least 1")?;
            check(o.ks_draws.unwrap_or(0) >= 1, "ks-draws", "must be at least 1")?;
        }
    }
    Ok(())
}

fn parse_phis(s: &str) -> CliResult<Vec<f64>> {
    let phis = s
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| usage(format!("--phis: {e}")))?;
    check(
        !phis.is_empty() && phis.iter().all(|p| p.is_finite() && *p > 0.0),
        "phis",
        "needs positive multipliers",
    )?;
    Ok(phis)
}

fn parse_pairs(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| usage(format!("--t-pairs: `{p}` is not a:b")))?;
            let a: usize = a.trim().parse().map_err(|_| usage(format!("--t-pairs: bad `{a}`")))?;
            let b: usize = b.trim().parse().map_err(|_| usage(format!("--t-pairs: bad `{b}`")))?;
            check(a >= 1 && b >= 1, "t-pairs", "needs generations >= 1")?;
            Ok((a, b))
        })
        .collect()
}

/// Resolves a textual driving sequence; `ctex` and `file` need `alpha`
/// or the filesystem.
pub fn resolve_seed(spec: &SeedSpec, alpha: f64) -> crate::Result<SeedSequence> {
    match spec {
        SeedSpec::Linear => Ok(SeedSequence::Linear),
        SeedSpec::Half => Ok(SeedSequence::Half),
        SeedSpec::Ctex(phi) => build_ctex_seed(alpha, phi),
        SeedSpec::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let values = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(parse_number)
                .collect::<crate::Result<Vec<f64>>>()?;
            SeedSequence::explicit(values)
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn opt_csv(v: Option<impl std::fmt::Display>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Runs a resolved, validated config.
pub fn dispatch(cfg: &Config, out: &mut dyn Write) -> CliResult<()> {
    match cfg {
        Config::Nu(o) => cmd_nu(o, out),
        Config::Recurse(o) => cmd_recurse(o, out),
        Config::SeedCtex(o) => cmd_seed_ctex(o, out),
        Config::Simulate(o) => cmd_simulate(o, out),
        Config::Freq(o) => cmd_freq(o, out),
        Config::Collapse(o) => cmd_collapse(o, out),
        Config::VerifyLemmas(o) => cmd_verify(o, out),
    }
}

fn cmd_nu(o: &config::NuOpts, out: &mut dyn Write) -> CliResult<()> {
    let alphas = match o.alpha {
        Some(a) => vec![a],
        None => grid(
            o.alpha_min.unwrap_or_default(),
            o.alpha_max.unwrap_or_default(),
            o.points.unwrap_or_default(),
            o.log_grid.unwrap_or_default(),
        ),
    };
    let mut s = String::from("alpha,T,nu,nu_approx,rel_err\n");
    for r in sweep(&alphas)? {
        writeln!(s, "{},{},{},{},{}", r.alpha, r.period, r.nu, r.nu_approx, r.rel_err).unwrap();
    }
    emit(&o.out, &s, out)
}

fn cmd_recurse(o: &config::RecurseOpts, out: &mut dyn Write) -> CliResult<()> {
    let alpha = o.alpha.unwrap_or_default();
    let spec: SeedSpec = o.seed.as_deref().unwrap_or("linear").parse()?;
    let seed = resolve_seed(&spec, alpha)?;
    let series = solve_chi(alpha, seed, o.t_max.unwrap_or_default())?;
    let mut s = String::from("t,log_chi,I_t,log_c_t,nu_hat\n");
    for t in 1..=series.t_max() {
        writeln!(
            s,
            "{t},{},{},{},{}",
            series.log_chi(t),
            series.dominant_index(t),
            series.log_c(t),
            opt_csv(series.nu_hat(t).ok())
        )
        .unwrap();
    }
    emit(&o.out, &s, out)?;
    if o.detect_period.unwrap_or_default() {
        let info = series.detect_period(o.tol.unwrap_or(crate::chi::PERIOD_TOL))?;
        let phi = extract_phi(&info.log_cycle, series.nu());
        let summary = json!({
            "t1": info.t1,
            "cycle": info.log_cycle.iter().map(|l| l.exp()).collect::<Vec<_>>(),
            "phi": phi.as_ref().ok(),
            "constraints_ok": phi.is_ok(),
        });
        writeln!(out, "{summary}")?;
    }
    Ok(())
}

fn cmd_seed_ctex(o: &config::SeedCtexOpts, out: &mut dyn Write) -> CliResult<()> {
    let phi = parse_phis(o.phis.as_deref().unwrap_or_default())?;
    let alpha = o
        .alpha
        .unwrap_or_else(|| phi.len() as f64 / phi.iter().product::<f64>());
    let t_max = o.t_max.unwrap_or_default();
    let check = verify_indu(alpha, &phi, t_max)?;
    let mut s = String::from("t,log_a,log_chi\n");
    for t in 1..=t_max {
        writeln!(s, "{t},{},{}", check.series.seed.log_a(t), check.series.log_chi(t)).unwrap();
    }
    emit(&o.out, &s, out)?;
    let summary = json!({
        "alpha": alpha,
        "T": phi.len(),
        "phi": phi,
        "passed": check.passed,
        "first_failure": check.first_failure,
        "max_rel_err": check.max_rel_err,
    });
    writeln!(out, "{summary}")?;
    if check.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "induction identity broke at t = {}",
            opt_csv(check.first_failure)
        )))
    }
}

fn sim_config(o: &config::SimulateOpts) -> SimConfig {
    let mut c = SimConfig::new(
        o.model.unwrap_or(crate::sim::Model::Fmm),
        o.tail.unwrap_or_else(|| TailModel::pareto(1.0).expect("valid tail")),
        o.beta.unwrap_or_default(),
        o.log_f.unwrap_or_default(),
        o.t_max.unwrap_or_default(),
        o.seed.unwrap_or_default(),
    );
    c.exact_event_cap = o.exact_event_cap.unwrap_or(c.exact_event_cap);
    c.mmm_bins_per_decade = o.mmm_bins_per_decade.unwrap_or(c.mmm_bins_per_decade);
    c.mmm_poisson_threshold = o.mmm_poisson_threshold.unwrap_or(c.mmm_poisson_threshold);
    c.restart_on_extinction = o.restart.unwrap_or(true);
    c
}

pub fn run_csv(record: &RunRecord) -> String {
    let mut s = String::from("t,log_X,log_W,n_classes,mode,dominant_age\n");
    for r in &record.rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.t,
            r.log_x,
            r.log_w,
            r.n_classes,
            r.mode,
            opt_csv(r.dominant_age)
        )
        .unwrap();
    }
    s
}

fn cmd_simulate(o: &config::SimulateOpts, out: &mut dyn Write) -> CliResult<()> {
    let cfg = sim_config(o);
    let replicas = o.replicas.unwrap_or(1);
    let records = run_replicas(&cfg, replicas, o.jobs.unwrap_or(0))?;
    let (lo, hi) = (o.slope_lo.unwrap_or(0), o.slope_hi.unwrap_or(0));
    let slopes: Vec<Option<f64>> = records
        .iter()
        .map(|r| loglog_slope(r, lo, hi).ok())
        .collect();
    let fitted: Vec<f64> = slopes.iter().flatten().copied().collect();
    let survived = records.iter().filter(|r| r.survived()).count();
    let restarts: u64 = records.iter().map(|r| r.restarts).sum();
    let summary = json!({
        "config": cfg,
        "replicas": replicas,
        "survived": survived,
        "restarts": restarts,
        "survival_fraction": survived as f64 / (replicas as f64 + restarts as f64),
        "slope": {
            "t_lo": lo,
            "t_hi": hi,
            "fitted": fitted.len(),
            "mean": (!fitted.is_empty()).then(|| crate::stats::mean(&fitted)),
            "min": fitted.iter().copied().reduce(f64::min),
            "max": fitted.iter().copied().reduce(f64::max),
            "per_run": slopes,
        },
        "switch_t": records.iter().map(|r| r.switch_t).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match &o.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (k, r) in records.iter().enumerate() {
                fs::write(dir.join(format!("run_{k:04}.csv")), run_csv(r))?;
            }
            fs::write(dir.join("summary.json"), format!("{text}\n"))?;
        }
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn snapshots_from_recursion(alpha: f64, init: &str, ts: &[usize]) -> CliResult<Vec<FreqSnapshot>> {
    let spec: SeedSpec = init.parse()?;
    let t_max = ts.iter().max().copied().unwrap_or(1) + 1;
    let series = solve_chi(alpha, resolve_seed(&spec, alpha)?, t_max)?;
    Ok(ts
        .iter()
        .map(|&t| freq_from_chi(&series, t))
        .collect::<crate::Result<Vec<_>>>()?)
}

fn cmd_freq(o: &config::FreqOpts, out: &mut dyn Write) -> CliResult<()> {
    let alpha = o.alpha.unwrap_or_default();
    let ts = o.t.clone().unwrap_or_default();
    let snaps = if o.from.as_deref() == Some("run") {
        let t_max = ts.iter().max().copied().unwrap_or(1) + 1;
        let mut c = SimConfig::new(
            o.model.unwrap_or(crate::sim::Model::Fmm),
            TailModel::pareto(alpha)?,
            o.beta.unwrap_or_default(),
            o.log_f.unwrap_or_default(),
            t_max,
            o.seed.unwrap_or_default(),
        );
        c.restart_on_extinction = true;
        let record = run(&c)?;
        ts.iter()
            .map(|&t| freq_from_run(&record, t))
            .collect::<crate::Result<Vec<_>>>()?
    } else {
        snapshots_from_recursion(alpha, o.init.as_deref().unwrap_or("linear"), &ts)?
    };
    let mut jr = String::from("t,i,J,R\n");
    let mut p = String::from("t,P\n");
    for snap in &snaps {
        for q in &snap.points {
            writeln!(jr, "{},{},{},{}", snap.t, q.i, q.j, q.r).unwrap();
        }
        writeln!(p, "{},{}", snap.t, opt_csv(snap.p)).unwrap();
    }
    emit(&o.out, &jr, out)?;
    if o.out.is_none() && o.p_out.is_none() {
        writeln!(out)?;
    }
    emit(&o.p_out, &p, out)
}

fn cmd_collapse(o: &config::CollapseOpts, out: &mut dyn Write) -> CliResult<()> {
    let alpha = o.alpha.unwrap_or_default();
    let pairs = parse_pairs(o.t_pairs.as_deref().unwrap_or_default())?;
    let ts: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let snaps = snapshots_from_recursion(alpha, o.init.as_deref().unwrap_or("linear"), &ts)?;
    let mut s = String::from("t_a,t_b,distance,compared,skipped\n");
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let rep = collapse_distance(&snaps[2 * k], &snaps[2 * k + 1])?;
        writeln!(s, "{a},{b},{},{},{}", rep.distance, rep.compared, rep.skipped).unwrap();
        if o.curve.unwrap_or_default() {
            let snap = &snaps[2 * k];
            let d = curve_distance(snap, homogeneous_curve);
            writeln!(s, "{a},homogeneous,{d},{},0", snap.points.len()).unwrap();
        }
    }
    emit(&o.out, &s, out)
}

/// Row of the lemma table.
struct CheckRow {
    name: String,
    empirical: f64,
    bound: f64,
    sigma: f64,
    pass: bool,
}

fn lemma_rows(replicas: usize, seed: u64, ks_draws: usize) -> crate::Result<Vec<CheckRow>> {
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(replica_seed(seed, k));
    let mut rows = Vec::new();
    let g = mc_verify_galton(101.0, 0.5, 5, replicas, &mut rng(0))?;
    rows.push(CheckRow {
        name: "galton(theta=101,x=0.5,n=5)".into(),
        empirical: g.empirical,
        bound: g.bound,
        sigma: g.sigma,
        pass: g.passes(),
    });
    let means = [2.0, 1.5, 2.0, 1.0, 2.0, 1.8, 2.0, 2.0, 0.5, 2.0];
    let d = mc_verify_tdg(&means, 1, 10.0, 2.0, replicas, &mut rng(1))?;
    rows.push(CheckRow {
        name: "tdg(K0=1,K=10,B=2,N=2)".into(),
        empirical: d.empirical,
        bound: d.bound,
        sigma: d.sigma,
        pass: d.passes(),
    });
    for (k, alpha) in [1.0, 2.0].into_iter().enumerate() {
        let tail = TailModel::pareto(alpha)?;
        let mut r = rng(2 + k as u64);
        let draws = (0..ks_draws)
            .map(|_| sample_fittest_mutant(0.0, &tail, &mut r))
            .collect::<crate::Result<Vec<f64>>>()?;
        let ks = ks_distance(&draws, |w| (-tail.log_tail(w).exp()).exp());
        rows.push(CheckRow {
            name: format!("fittest_mutant_ks(lambda=1,alpha={alpha})"),
            empirical: ks,
            bound: 0.01,
            sigma: 0.0,
            pass: ks <= 0.01,
        });
        let atom = draws.iter().filter(|w| **w == f64::NEG_INFINITY).count() as f64 / ks_draws as f64;
        let p = (-1f64).exp();
        let sigma = (p * (1.0 - p) / ks_draws as f64).sqrt();
        rows.push(CheckRow {
            name: format!("fittest_mutant_atom(lambda=1,alpha={alpha})"),
            empirical: atom,
            bound: p,
            sigma,
            pass: (atom - p).abs() <= 3.0 * sigma,
        });
    }
    Ok(rows)
}

fn cmd_verify(o: &config::VerifyOpts, out: &mut dyn Write) -> CliResult<()> {
    let rows = lemma_rows(
        o.replicas.unwrap_or_default(),
        o.seed.unwrap_or_default(),
        o.ks_draws.unwrap_or_default(),
    )?;
    let mut s = String::from("check,empirical,bound,sigma,pass\n");
    for r in &rows {
        writeln!(s, "{},{},{},{},{}", r.name, r.empirical, r.bound, r.sigma, r.pass).unwrap();
    }
    out.write_all(s.as_bytes())?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed.join(", ")))
    }
}

/// Entry point used by the binary.
pub fn main_exit_code() -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
