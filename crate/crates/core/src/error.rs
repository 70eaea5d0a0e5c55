use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("neighbor count {j} out of range 1..={n}")]
    NeighborCountOutOfRange { j: usize, n: usize },

    #[error("invalid k list: {0}")]
    InvalidKList(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("point cloud mismatch: {0}")]
    CloudMismatch(String),

    #[error("simplex budget exceeded: {count} simplices > budget {budget}")]
    SimplexBudget { count: u128, budget: usize },

    #[error("slice spec incompatible with k list; missing k values: {missing:?}")]
    MissingKValues { missing: Vec<u32> },

    #[error("non-monotone filtration: face {face} has value {face_value} > {coface_value} of coface {coface}")]
    NonMonotone {
        face: String,
        face_value: f64,
        coface: String,
        coface_value: f64,
    },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("unknown manifold tag `{0}`")]
    UnknownManifold(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
