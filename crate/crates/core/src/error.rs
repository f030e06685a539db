use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(u32),
    #[error("generator index {index} out of range for rank {rank}")]
    InvalidGenerator { index: u32, rank: u32 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("{what} needs {requested} items, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: String,
        cap: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("letter set must be nonempty")]
    EmptyLetterSet,
    #[error("invalid free-product configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
