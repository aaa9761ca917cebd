use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field degree {0} out of range 1..=30")]
    DegreeOutOfRange(u32),
    #[error("modulus {0:#x} is not an irreducible polynomial with nonzero constant term")]
    Reducible(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {bits:#x} does not belong to F_2^{degree}")]
    ForeignElement { bits: u64, degree: u32 },
    #[error("invalid sheaf parameters: {0}")]
    InvalidSpec(String),
    #[error("descent trace is only defined for t != 0")]
    ZeroDescentPoint,
    #[error("{0}")]
    Precondition(String),
    #[error("field degree {degree} exceeds the limit {limit} for this computation")]
    TooLarge { degree: u32, limit: u32 },
    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),
    #[error("interval failed to isolate an integer at {0} bits")]
    Isolation(u32),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
