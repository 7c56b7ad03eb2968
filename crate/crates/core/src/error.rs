use thiserror::Error;

/// Errors raised by scenario validation and the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("item index {index} out of range for database of size {n_items}")]
    IndexOutOfRange { index: usize, n_items: usize },
    #[error("database must contain at least one item")]
    EmptyDatabase,
    #[error("target set is empty; at least one target is required")]
    EmptyTargets,
    #[error("information set {set} is empty")]
    EmptyInfoSet { set: usize },
    #[error("no information sets given")]
    NoInfoSets,
    #[error("information set {set} has non-positive or non-finite weight {weight}")]
    BadWeight { set: usize, weight: f64 },
    #[error("weights sum to {sum}, expected 1 within 1e-12")]
    WeightSum { sum: f64 },
    #[error("coverage violated: target {item} is not in any information set")]
    CoverageViolation { item: usize },
    #[error("energy scale must be positive and finite, got {0}")]
    BadEnergy(f64),
    #[error("overlap parameter y = {0} is outside (0, 1]")]
    BadOverlap(f64),
    #[error("time must be non-negative and finite, got {0}")]
    BadTime(f64),
    #[error("amplitude sequence is identically zero")]
    ZeroAmplitude,
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("register size must be at least 2, got {0}")]
    RegisterTooSmall(usize),
    #[error("database size {n} exceeds the full-simulation cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed distribution: {0}")]
    BadDistribution(String),
    #[error("empty sample set")]
    NoSamples,
    #[error("support size must be at least 1")]
    EmptySupport,
    #[error("tail parameter m = {0} must exceed 1")]
    BadTailParameter(f64),
    #[error("grid value {0} is outside (0, 1)")]
    GridOutOfRange(f64),
    #[error("invalid misplaced-confidence structure: {0}")]
    BadStructure(String),
    #[error("infeasible generator constraints: {0}")]
    Infeasible(String),
    #[error("register size {m} is below the counting requirement 4*(l+R) = {required}")]
    RegisterTooCoarse { m: usize, required: usize },
    #[error("scenario parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = SearchError> = std::result::Result<T, E>;
