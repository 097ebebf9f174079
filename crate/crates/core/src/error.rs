use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..=16")]
    UnsupportedDimension(u32),

    #[error("expected {expected} elements, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid hex truth table: {0}")]
    InvalidHex(String),

    #[error("dimension {0} is even; odd-dimension bounds are undefined")]
    EvenDimension(u32),

    #[error("no best-known nonlinearity recorded for n = {0}")]
    NoBestKnown(u32),

    #[error("value {0} is outside [0, 1]")]
    ValueOutOfRange(f64),

    #[error("variable x{var} is not bound for n = {n}")]
    UnboundVariable { var: u8, n: u32 },

    #[error("cannot parse expression: {0}")]
    Parse(String),

    #[error("genotype does not match the problem encoding: {0}")]
    EncodingMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("population of {actual} is too small; need at least {required}")]
    PopulationTooSmall { required: usize, actual: usize },

    #[error("no records to export")]
    EmptyInput,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
