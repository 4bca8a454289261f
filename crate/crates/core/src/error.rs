use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample size n = {0} is invalid (n must be at least 2)")]
    InvalidN(u32),
    #[error("rank i = {rank} is outside 1..={sample_size}")]
    InvalidRank { rank: u32, sample_size: u32 },
    #[error("sigma = {0} is invalid (must be finite and > 0)")]
    InvalidSigma(f64),
    #[error("{name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("h(n) is not available for n = {0}")]
    NotAvailable(u32),
    #[error("quadrature did not converge after {segments} segments (error estimate {error_estimate:e}, value {value})")]
    NonConvergence {
        segments: usize,
        error_estimate: f64,
        value: f64,
    },
    #[error("at least 2 bids are required, got {0}")]
    TooFewBids(usize),
    #[error("bid {index} is not finite")]
    NonFiniteBid { index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(
        "sigma axis undecided: no mean price available, pass an explicit sigma_large override"
    )]
    SigmaAxisUndetermined,
    #[error("design {0} is not a two-stage design")]
    InvalidDesign(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep its rendering.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(IoError(e.to_string()))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
