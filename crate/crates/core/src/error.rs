use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Budget exhaustion has its own variant so that callers can tell a guardrail
/// trip apart from a mathematical verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("polynomials live in different rings ({left} vs {right} variables)")]
    NvarsMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("invalid hypersurface: {0}")]
    InvalidHypersurface(String),

    #[error("invalid projective point: {0}")]
    InvalidPoint(String),

    #[error("point {0} does not lie on the hypersurface")]
    PointNotOnHypersurface(String),

    #[error("point {0} is not a singular point")]
    PointNotSingular(String),

    #[error("point {0} listed twice")]
    DuplicatePoint(String),

    #[error("germ has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("germ has a nonzero linear part")]
    NonzeroLinearPart,

    #[error("zero germ")]
    ZeroGerm,

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("singularity at {0} is not isolated (infinite Milnor number)")]
    NonIsolated(String),

    #[error("reduction budget of {limit} steps exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("negative polar degree {0}: singular point list is incomplete or wrong")]
    NegativePolarDegree(i64),

    #[error("polynomial has degree 0 in variable {0}")]
    DegenerateDegree(usize),

    #[error("curves share a common component")]
    CommonComponent,

    #[error("result unstable across random coordinate changes: {0:?}")]
    Unstable(Vec<usize>),

    #[error("germ is not reduced")]
    NonReduced,

    #[error("recursion depth {0} exceeded")]
    DepthExceeded(usize),

    #[error("no generic choice found after {0} attempts")]
    NonGeneric(usize),

    #[error("classification cross-check failed: {0}")]
    ClassificationMismatch(String),

    #[error("corpus error: {0}")]
    Corpus(String),
}

pub type Result<T> = std::result::Result<T, Error>;
