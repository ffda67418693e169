use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ideals belong to different fields (disc {0} vs {1})")]
    MismatchedFields(i64, i64),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("invalid field parameter d = {0}: must be a squarefree positive integer")]
    BadField(i64),
    #[error("factor limit: norm {norm} has a cofactor beyond the trial-division bound {bound}")]
    FactorLimit { norm: String, bound: u64 },
    #[error("principality enumeration bound exceeded (norm {0})")]
    PrincipalBound(String),
    #[error("enumeration budget exhausted: {0}")]
    EnumerationBudget(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("conductor {small} does not divide {big}")]
    NonDivisible { small: String, big: String },
    #[error("positivity failure: {0}")]
    NotPositive(String),
    #[error("pole at the requested point")]
    Pole,
    #[error("smallest eigenvalue of Im(tau) {lambda:.3e} is below the floor {floor:.3e}; reduce tau first")]
    LambdaFloor { lambda: f64, floor: f64 },
    #[error("precision {0} bits is too small")]
    PrecisionTooLow(u32),
    #[error("no integer relation within budget: {0}")]
    RecognitionFailed(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
