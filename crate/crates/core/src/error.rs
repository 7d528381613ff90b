use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: qudit dimension must be at least 2")]
    InvalidDimension(u32),

    #[error("unsupported dimension {0}: tableau operations require a prime qudit dimension")]
    NonPrimeDimension(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("unknown gate kind `{0}` (expected one of X, Z, F, P, CZ, T)")]
    UnknownGate(String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("map is not CPTP: {0}")]
    NotCptp(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid Clifford tableau: {0}")]
    InvalidTableau(String),

    #[error("Clifford group for d={d}, n={n} has {cardinality} elements, above the enumeration cap of {cap}")]
    GroupTooLarge { d: u32, n: usize, cardinality: u128, cap: u128 },

    #[error("Clifford synthesis failed: {0}")]
    SynthesisFailure(String),

    #[error("flat decay curve (range {range:.3e}): decay base is unidentifiable because the amplitude vanishes")]
    FlatCurve { range: f64, level: f64 },

    #[error("insufficient data for fitting: {0}")]
    InsufficientData(String),

    #[error("negative survival probability {0:.3e} signals a non-CPTP evolution")]
    NegativeProbability(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cache format error: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
