use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

/// Means above this use a continuity-corrected normal approximation.
pub const NORMAL_APPROX_MEAN: f64 = 1e9;

/// Poisson draw as an integer count; non-positive means give 0.
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    if mean > NORMAL_APPROX_MEAN {
        let z: f64 = rng.sample(StandardNormal);
        return (mean + mean.sqrt() * z + 0.5).floor().max(0.0) as u64;
    }
    Poisson::new(mean)
        .map(|p| p.sample(rng) as u64)
        .unwrap_or(0)
}
