use thiserror::Error;

/// Errors shared across the computation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("d∘d ≠ 0 at degree {degree}: {witness}")]
    NotAComplex { degree: i64, witness: String },

    #[error("chain map does not commute with differentials at degree {0}")]
    NonCommutingSquare(i64),

    #[error("element is not a unit: {0}")]
    NotAUnit(String),

    #[error("bialgebra axiom failed: {0}")]
    HopfAxiom(String),

    #[error("resolution not exact at homological degree {0}")]
    NotExact(usize),

    #[error("chain-map lifting failed at degree {0}")]
    LiftFailed(usize),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("resource budget exceeded: {0}")]
    ResourceExceeded(String),

    #[error("differential assignment rejected for generator {generator}: {reason}")]
    BadAssignment { generator: String, reason: String },

    #[error("abutment unreachable; closest misses: {0}")]
    AbutmentUnreachable(String),

    #[error("forced search found {0} consistent patterns, expected a unique one")]
    AmbiguousPattern(usize),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
