//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge list format error at line {line}: {msg}")]
    EdgeListFormat { line: usize, msg: String },

    #[error("data format error: {0}")]
    DataFormat(String),

    #[error("series for node {node} has zero power; SNR is undefined")]
    ZeroPower { node: usize },

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("per-sample loss at index {index} is {value}, violating the nonnegativity contract")]
    NegativeLoss { index: usize, value: f64 },

    #[error("per-sample loss at index {index} is non-finite")]
    NonFiniteLoss { index: usize },

    #[error("every sample was rejected; pace parameter retried {retries} times without recovering")]
    AllSamplesRejected { retries: usize },

    #[error("outer iteration {iteration} failed: {source}")]
    IterationFailed {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach outer-iteration context to an error bubbling out of an
    /// embedded inference method.
    pub fn at_iteration(self, iteration: usize) -> Error {
        Error::IterationFailed {
            iteration,
            source: Box::new(self),
        }
    }
}
