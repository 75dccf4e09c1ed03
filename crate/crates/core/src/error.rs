use thiserror::Error;

/// Errors raised by the library. Some variants (`CapExceeded`) are control
/// signals for the hybrid simulator rather than failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inversion did not converge: residual {residual:e} after {iterations} iterations (log_g = {log_g})")]
    NonConvergence {
        log_g: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("no period detected in {t_max} generations (T = {period})")]
    NoPeriodDetected { t_max: usize, period: usize },

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("expected offspring {expected:e} exceeds exact event cap {cap:e}")]
    CapExceeded { expected: f64, cap: f64 },

    #[error("population went extinct {restarts} times; survival probability looks negligible")]
    TooManyRestarts { restarts: u64 },

    #[error("missing history: {0}")]
    MissingHistory(String),

    #[error("insufficient overlap: {skipped} of {total} points outside the reference range")]
    InsufficientOverlap { skipped: usize, total: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
