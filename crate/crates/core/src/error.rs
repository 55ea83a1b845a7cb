//! Shared error type for the wave-construction and verification pipeline.

use thiserror::Error;

/// Errors produced by model evaluation, wave construction, and the verifiers.
///
/// Variants are grouped by how a caller should react:
/// * [`Error::Domain`], [`Error::InvalidLimits`], [`Error::Precondition`] —
///   the inputs are outside the contract (caller bug or bad user input).
/// * [`Error::NoWave`] — the inputs are well-formed but no monotone traveling
///   wave connects the requested limits; the message names the violated
///   condition.
/// * [`Error::Numeric`] — an internal numerical process failed (CFL blow-up,
///   step-size underflow, non-monotone orbit step, …).
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested wave limits cannot define a wave of either direction.
    #[error("invalid wave limits: {0}")]
    InvalidLimits(String),

    /// No traveling wave exists for the given data; names the failed condition.
    #[error("no traveling wave: {0}")]
    NoWave(String),

    /// An operation precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical process failed mid-flight.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
