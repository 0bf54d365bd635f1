use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Scenario-level failures (a run that blows up, a refused admission) are
/// reported through statuses and reports, not through this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gradient blow-up: 1 + beta0*K = {denominator} <= 0")]
    BlowUp { denominator: f64 },

    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid grid size {0}: must be a power of two >= 16")]
    InvalidGrid(usize),

    #[error("non-finite state: {0}")]
    NonFinite(String),

    #[error("max characteristic speed below 1e-12, fallback dt = {fallback_dt}")]
    DegenerateSpeed { fallback_dt: f64 },

    #[error("characteristic starts outside the hyperbolic region: u = {u}")]
    EllipticStart { u: f64 },

    #[error("trajectory window too short: {0} snapshot(s), need at least 2")]
    WindowTooShort(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
