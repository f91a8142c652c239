use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large for a residue table")]
    PrimeTooLarge(u64),
    #[error("character sum needs (a, b) not both divisible by p")]
    DegenerateCharSum,
    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("prime {p} is not generic for this family: {reason}")]
    NonGeneric { p: u64, reason: String },
    #[error("invalid root data: {0}")]
    InvalidRoots(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
