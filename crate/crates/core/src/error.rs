use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("anchor point is at the origin")]
    OriginAnchor,
    #[error("weight must be nonzero")]
    ZeroWeight,
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("sphere centers are not pairwise distinct")]
    DuplicateCenters,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    InvalidDim(usize),
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("invalid tolerance {0}: must satisfy 0 < eps < 1")]
    InvalidTolerance(f64),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("graph has {vertices} vertices, exhaustive search limit is {limit}")]
    GraphTooLarge { vertices: usize, limit: usize },

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate triangle type: {0}")]
    DegenerateType(String),
    #[error("radius weights must be positive in distance mode, got {0}")]
    NegativeRadius(f64),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("work budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("unsupported counting semantics: {0}")]
    UnsupportedSemantics(String),
    #[error("dot-product templates require nonzero weights")]
    ZeroWeightInDotMode,

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("need at least 3 samples, got {0}")]
    InsufficientSamples(usize),
    #[error("sample at n={0} has zero count")]
    ZeroCount(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by exhausting a work budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
