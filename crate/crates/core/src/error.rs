use thiserror::Error;

/// Errors raised by series evaluation, Frobenius solving and the identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("series did not converge after {terms_used} terms (partial value {partial:e})")]
    NotConverged { terms_used: usize, partial: f64 },

    #[error("resonant exponents: {0}")]
    ResonantExponent(String),

    #[error("{lambda} is not a root of the indicial equation")]
    NotIndicialRoot { lambda: String },

    #[error("pole in coefficient formula: {0}")]
    PoleInCoefficients(String),

    #[error("least-squares basis is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HypError>;
