//! Branching populations under selection and Frechet-type mutation.
//!
//! * [`tail`]: mutant fitness laws, evaluated and sampled in log domain.
//! * [`growth`]: the growth exponent `nu(alpha)` and its horizon `T`.
//! * [`chi`]: the deterministic max-plus recursion and its periodic structure.
//! * [`sim`]: stochastic FMM/MMM simulation plus Monte Carlo lemma checks.
//! * [`analysis`]: frequency-distribution observables and growth fits.
//! * [`cli`]: the `branchlab` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod chi;
pub mod cli;
pub mod error;
pub mod growth;
pub mod logmath;
pub mod sim;
pub mod stats;
pub mod tail;

pub use chi::{solve_chi, ChiSeries, SeedSequence};
pub use error::{Error, Result};
pub use growth::{nu, period_t, GrowthLaw};
pub use tail::TailModel;
