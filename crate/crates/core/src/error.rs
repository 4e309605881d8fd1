use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),
    #[error("inadmissible s(r): {0}")]
    InadmissibleS(String),
    #[error("missing capability, skipped checks: {}", .skipped.join(", "))]
    Capability { skipped: Vec<String> },
    #[error("construction inapplicable: {0}")]
    ConstructionInapplicable(String),
    #[error("division singularity at log r = {log_r}")]
    Singularity { log_r: f64 },
    #[error("truncation insufficient: achieved tail bound {achieved:e}, requested {requested:e}")]
    TruncationInsufficient { achieved: f64, requested: f64 },
    #[error("zero sequence does not define an entire product: {0}")]
    NotEntire(String),
    #[error("unsupported model variant: {0}")]
    UnsupportedVariant(String),
    #[error("uncertified roots: {0}")]
    UncertifiedRoots(String),
    #[error("singularity within {clearance:e} of the circle log r = {log_r}; try log r = {suggested_log_r}")]
    PoleNearCircle { log_r: f64, clearance: f64, suggested_log_r: f64 },
    #[error("radius log r = {log_r} outside certified range (max usable log r = {max_log_r})")]
    RadiusOutOfRange { log_r: f64, max_log_r: f64 },
    #[error("inconsistent equation: resonance with nonzero right side at k = {index}")]
    InconsistentEquation { index: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("i/o error on {path:?}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.into(), message: err.to_string() }
    }

    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }
}
