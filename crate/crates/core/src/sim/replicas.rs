use rayon::prelude::*;

use super::engine::{run, RunRecord};
use super::SimConfig;
use crate::error::{Error, Result};

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of replica `k` derived from a base seed.
pub fn replica_seed(base: u64, k: u64) -> u64 {
    base ^ splitmix64(k)
}

/// Runs `replicas` independent copies of `cfg` on `jobs` threads
/// (`0` = rayon default). Output order matches replica index, so the
/// result does not depend on `jobs`.
pub fn run_replicas(cfg: &SimConfig, replicas: usize, jobs: usize) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..replicas as u64)
            .into_par_iter()
            .map(|k| {
                let mut c = cfg.clone();
                c.seed = replica_seed(cfg.seed, k);
                run(&c)
            })
            .collect()
    })
}
