use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("uniform variate {0} is outside [0, 1)")]
    UniformOutOfRange(f64),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("vertex {vertex} is not alive at step {step} ({alive} vertices)")]
    VertexNotAlive { vertex: u32, step: u64, alive: u32 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("oracle horizon t = {t} exceeds the enumeration cap {cap}")]
    HorizonTooLarge { t: u64, cap: u64 },

    #[error("unsupported statistic `{0}`")]
    UnknownStatistic(String),

    #[error("invalid probability `{0}`")]
    InvalidProbability(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("exponent fit refused: {0}")]
    Fit(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
