use crate::Complex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeunError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),
    #[error("invalid singularity: {0}")]
    InvalidSingularity(String),
    #[error("invalid exponent: {0}")]
    Exponent(String),
    #[error("parameters outside the required regime: {0}")]
    Regime(String),
    #[error("zero pivot S_n at n = {n}; the expansion fails (resonance)")]
    ZeroPivot { n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("step size underflow near z = {z}")]
    StepUnderflow { z: Complex },
    #[error("resonant exponents: {0}")]
    Resonance(String),
}

pub type Result<T> = std::result::Result<T, HeunError>;
