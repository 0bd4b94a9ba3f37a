use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix is not symmetric (entry ({row},{col}))")]
    NotSymmetric { row: usize, col: usize },

    #[error("form is not unimodular: determinant {0}")]
    NotUnimodular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("the zero class has no primitivity")]
    ZeroClass,

    #[error("class ({0}) is not primitive")]
    NotPrimitive(String),

    #[error("class ({0}) is not characteristic for the form")]
    NotCharacteristic(String),

    #[error("bundle multiplier must be at least 1, got {0}")]
    InvalidMultiplier(i64),

    #[error("base has rank 0; a circle bundle needs b2(B) >= 1")]
    EmptyBase,

    #[error("level must be a positive even integer, got {0}")]
    InvalidLevel(i64),

    #[error("operation requires a non-spin base")]
    SpinBase,

    #[error("operation requires a base of the form cp(a,b) (diagonal provenance)")]
    NotDiagonal,

    #[error("operation requires fundamental group Z/2 (multiplier 2), got Z/{0}")]
    NotZ2(u64),

    #[error("target residue must be in 0..=3, got {0}")]
    InvalidTarget(u8),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("missing pairing value for monomial {0}")]
    MissingPairing(String),

    #[error("incompatible series: {0}")]
    IncompatibleSeries(&'static str),

    #[error("series is not a unit (zero constant term)")]
    NotAUnit,

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    /// Internal failures indicate a bug or a broken mathematical invariant,
    /// everything else is bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
