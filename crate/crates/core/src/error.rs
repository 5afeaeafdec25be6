use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("partition is not equitable")]
    NotEquitable,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("symmetric eigen-solve failed to converge")]
    EigenSolveFailed,

    #[error("graph is disconnected; fractional revival certification requires a connected graph")]
    Disconnected,

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
