use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("element {element} appears more than once")]
    DuplicateElement { element: usize },

    #[error("element {element} is outside the ground set [1..{n}]")]
    OutOfRange { element: usize, n: usize },

    #[error("element {element} of [1..{n}] is missing")]
    MissingElement { element: usize, n: usize },

    #[error("ground size {got} is not supported (expected {expected})")]
    GroundSize { got: usize, expected: String },

    #[error("ground sizes differ: {0} vs {1}")]
    GroundMismatch(usize, usize),

    #[error("enumeration cap exceeded: size {size} > cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("partition is not in the required family: {0}")]
    NotInFamily(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("invalid rank vector: {0}")]
    RankVector(String),

    #[error("exponents undefined for m = 1")]
    SingleMoment,

    #[error("coefficient family violates a precondition: {0}")]
    Support(String),

    #[error("dimension {dim} exceeds cap {cap}")]
    Dimension { dim: usize, cap: usize },

    #[error("numerical check failed: {0}")]
    Numeric(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
