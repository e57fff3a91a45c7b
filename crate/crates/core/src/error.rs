use thiserror::Error;

/// Errors raised by the library. Each variant names the offending quantity.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration value is invalid or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    /// A causal-site structure lacks a region an axiom promises.
    #[error("structural error: {0}")]
    Structural(String),
    /// Malformed input text; the message carries the parse location.
    #[error("parse error: {0}")]
    Parse(String),
    /// A run left the regime its numerics are valid in.
    #[error("runtime error: {0}")]
    Runtime(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
