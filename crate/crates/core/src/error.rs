use thiserror::Error;

/// Errors raised by the library.
///
/// Analysis verdicts that come out negative are *not* errors; they are
/// reported in the corresponding report types. Errors are reserved for
/// violated preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cyclotomic index mismatch: {0} vs {1}")]
    IndexMismatch(u8, u8),

    #[error("unsupported cyclotomic index {0} (expected 4, 5 or 8)")]
    UnsupportedIndex(u8),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("requested radius {requested} exceeds the certified window {window}")]
    WindowExceeded { requested: f64, window: f64 },

    #[error("too few points: {0}")]
    TooFewPoints(String),

    #[error("illegal seed `{seed}` for system `{system}`")]
    IllegalSeed { system: String, seed: String },

    #[error("tiling system mismatch: expected {expected}, found {found}")]
    SystemMismatch { expected: String, found: String },

    #[error("reconstruction failed near ({x:.4}, {y:.4}): {reason}")]
    ReconstructionFailure { x: f64, y: f64, reason: String },

    #[error("patch carries no edge decorations")]
    MissingDecoration,

    #[error("isometry is not exactly representable: {0}")]
    NonExactIsometry(String),

    #[error("singular lattice basis")]
    SingularBasis,

    #[error("rotation ({0}, {1}) is not on the unit circle")]
    NotOnUnitCircle(String, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
