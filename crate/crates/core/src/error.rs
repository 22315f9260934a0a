use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Lie type {series}{rank}: {reason}")]
    InvalidType {
        series: char,
        rank: usize,
        reason: &'static str,
    },

    #[error("weight length {got} does not match rank {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("weight {weight} is not in the level-{level} alcove")]
    NotInAlcove { weight: String, level: u32 },

    #[error("capacity exceeded: {what} = {size} (cap {cap})")]
    Capacity {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("level {level} too small for probe weight {probe}")]
    LevelTooSmall { level: u32, probe: String },

    #[error("i/o: {0}")]
    Io(String),

    #[error("format: {0}")]
    Format(String),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
