use thiserror::Error;

/// Errors raised while constructing or combining measurement-theoretic objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (anti-Hermitian part has norm {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("effect exceeds the identity (maximum eigenvalue {0:.3e})")]
    ExceedsIdentity(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not an isometry (defect {0:.3e})")]
    NotIsometry(f64),
    #[error("effects are not orthogonal: a + b exceeds the identity")]
    NotOrthogonal,
    #[error("conditioning on an event of probability {0:.3e}")]
    ConditioningOnNull(f64),
    #[error("label {0:?} appears more than once")]
    LabelCollision(String),
    #[error("effects do not sum to the identity (deviation {0:.3e})")]
    NotResolutionOfIdentity(f64),
    #[error("label {0:?} is not an ordered pair \"(x,y)\"")]
    MalformedLabels(String),
    #[error("invalid mixture weights: {0}")]
    WeightInvalid(String),
    #[error("observables in a mixture must share one label list")]
    LabelMismatch,
    #[error("unsupported dimension {0}")]
    BadDimension(usize),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("instrument is not compatible with the observable")]
    IncompatibleInstrument,
    #[error("label subsets overlap at {0:?}")]
    OverlappingSubsets(String),
    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),
    #[error("direction has norm {0}, expected a unit vector")]
    NotUnit(f64),
    #[error("trace {0:.6} is not a valid state trace")]
    BadTrace(f64),
    #[error("operation increases trace (Kraus sum exceeds identity by {0:.3e})")]
    TraceIncreasing(f64),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("probability {0} outside [0, 1] beyond tolerance")]
    ProbabilityOutOfRange(f64),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
