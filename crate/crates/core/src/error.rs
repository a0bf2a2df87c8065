use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component {index} is negative ({value})")]
    NegativeComponent { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside domain: {0}")]
    OutOfDomain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A model hypothesis required by the requested estimator does not hold.
    #[error("{assumption} fails: {detail}")]
    Hypothesis { assumption: String, detail: String },

    #[error("no exceedances: {0}")]
    NoExceedances(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn hypothesis(assumption: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            assumption: assumption.into(),
            detail: detail.into(),
        }
    }
}
