use thiserror::Error;

/// Failure modes across the library. Variants carry enough state to
/// diagnose a run without re-executing it.
#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("seed ({alpha}, {beta}) violates the admissible-region constraint: {reason}")]
    SeedInvariant { alpha: f64, beta: f64, reason: String },

    #[error("step size underflow at eta = {eta} (state x = {x}, y = {y})")]
    StepUnderflow { eta: f64, x: f64, y: f64 },

    #[error("non-finite state at eta = {eta}")]
    NonFiniteState { eta: f64 },

    #[error("not enough oscillations: found {found}, need at least {need}")]
    NotEnoughOscillations { found: usize, need: usize },

    #[error("bracketing failed after {attempts} expansions: lo = {lo} ({lo_class}), hi = {hi} ({hi_class})")]
    BracketFailure { lo: f64, hi: f64, lo_class: String, hi_class: String, attempts: usize },

    #[error("degenerate event: {0}")]
    DegenerateEvent(String),

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
