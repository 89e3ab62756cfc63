use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid batch grid: {0}")]
    InvalidGrid(String),

    #[error("invalid decision rule: {0}")]
    InvalidRule(String),

    #[error("unknown policy kind `{0}`")]
    UnknownPolicy(String),

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("policy `{0}` requires a context vector")]
    ContextRequired(&'static str),

    #[error("reward {reward} is outside the support accepted by `{policy}`")]
    InvalidReward { policy: &'static str, reward: f64 },

    #[error("non-finite statistics in policy state")]
    NonFinite,

    #[error("invalid analysis request: {0}")]
    InvalidAnalysis(String),

    #[error("{path}:{line}: {message}")]
    LogParse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid log: {0}")]
    InvalidLog(String),

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
