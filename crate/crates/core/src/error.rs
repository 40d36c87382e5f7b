// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("density has zero or non-finite mass")]
    ZeroMass,
    #[error("negative density value {value} at node {index}")]
    NegativeDensity { index: usize, value: f64 },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("potential is not confining: {0}")]
    NotConfining(String),
    #[error("sign error: {0}")]
    SignError(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no bound state: lowest eigenvalue {energy} is not negative")]
    NoBoundState { energy: f64 },
    #[error("grid too narrow: edge density is {ratio:e} of the peak")]
    GridTooNarrow { ratio: f64 },
    #[error("eigensolver did not converge: {0}")]
    EigenNotConverged(String),
    #[error("perturbation invalid: |eps|/omega = {ratio} exceeds {limit}")]
    PerturbationInvalid { ratio: f64, limit: f64 },
    #[error("clamped mass {mass:e} exceeds 1e-3")]
    ClampMassExceeded { mass: f64 },
    #[error("y = {0} is outside the price-return domain y > 0")]
    DomainError(f64),
    #[error("non-positive price {value} at row {index}")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("insufficient data: {got} values, need at least {need}")]
    InsufficientData { got: usize, need: usize },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("optimizer did not converge after {evaluations} evaluations")]
    NotConverged { evaluations: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Coarse classification used for exit codes and machine-readable reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad input data or arguments.
    Data,
    /// The numerics failed on otherwise valid input.
    Numerical,
}

impl Error {
    /// Variant name, stable for JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::ZeroMass => "ZeroMass",
            Error::NegativeDensity { .. } => "NegativeDensity",
            Error::NonFinite(_) => "NonFinite",
            Error::NotConfining(_) => "NotConfining",
            Error::SignError(_) => "SignError",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NoBoundState { .. } => "NoBoundState",
            Error::GridTooNarrow { .. } => "GridTooNarrow",
            Error::EigenNotConverged(_) => "EigenNotConverged",
            Error::PerturbationInvalid { .. } => "PerturbationInvalid",
            Error::ClampMassExceeded { .. } => "ClampMassExceeded",
            Error::DomainError(_) => "DomainError",
            Error::NonPositivePrice { .. } => "NonPositivePrice",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::DegenerateData(_) => "DegenerateData",
            Error::NotConverged { .. } => "NotConverged",
            Error::Precondition(_) => "Precondition",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::NoBoundState { .. }
            | Error::GridTooNarrow { .. }
            | Error::EigenNotConverged(_)
            | Error::PerturbationInvalid { .. }
            | Error::ClampMassExceeded { .. }
            | Error::NotConverged { .. } => ErrorCategory::Numerical,
            _ => ErrorCategory::Data,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
