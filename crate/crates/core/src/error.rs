use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("valuation of zero is not defined")]
    ZeroInput,
    #[error("{value} has negative {p}-adic valuation {valuation}")]
    NegativeValuation { value: String, p: u64, valuation: i64 },
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("congruence exponent must be at least 1")]
    InvalidExponent,
    #[error("{x} is not a {p}-adic integer")]
    NotPAdicInteger { x: String, p: u64 },
    #[error("{a} is not coprime to {p}")]
    NotCoprime { a: i64, p: u64 },
    #[error("parameter d must be nonzero")]
    ZeroD,
    #[error("d = {d} is not a {p}-adic unit")]
    DNotUnit { d: String, p: u64 },
    #[error("p = {p} is outside the validity range of {statement}: {reason}")]
    OutOfRangePrime { statement: String, p: u64, reason: String },
    #[error("p = {p} is in the wrong residue class for {statement}: {reason}")]
    WrongResidueClass { statement: String, p: u64, reason: String },
    #[error("{statement} needs parameter `{param}`")]
    MissingParameter { statement: String, param: &'static str },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("unknown statement id {0:?}")]
    UnknownStatement(String),
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
