use thiserror::Error;

/// Failures reported by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    #[error("state norm {norm} deviates from 1 by more than the strict tolerance")]
    NotNormalized { norm: f64 },
    #[error("state has zero norm and cannot be normalized")]
    ZeroState,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("maximum of {max_steps} integration steps exceeded at t = {t:e}")]
    MaxStepsExceeded { max_steps: usize, t: f64 },
    #[error("amplitudes became non-finite at t = {t:e}")]
    NonFiniteState { t: f64 },
    #[error("degenerate state: first amplitude is zero")]
    DegenerateState,
    #[error("logarithm argument vanishes for this state and coupling")]
    DegenerateLog,
    #[error("zero coupling: the constant is undefined and the map is the identity")]
    ZeroCoupling,
}

pub type Result<T> = std::result::Result<T, Error>;
