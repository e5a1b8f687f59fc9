use thiserror::Error;

/// Errors raised by the numerical routines and model constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A series or quadrature hit its work budget before meeting its tolerance.
    #[error("no convergence after {terms} terms (last term {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },

    /// An argument lies outside the domain the routine is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model coefficients make the closed-form solution undefined.
    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    /// Evaluation policy is internally inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
