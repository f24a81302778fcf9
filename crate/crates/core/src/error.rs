use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("zero matrix cannot be normalized")]
    ZeroMatrix,
    #[error("point set is affinely dependent")]
    AffinelyDependent,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("subspace basis is linearly dependent or empty")]
    DependentBasis,
    #[error("matrix does not lie in the subspace")]
    NotInSubspace,
    #[error("cone has no rays")]
    EmptyCone,
    #[error("zero-dimensional ambient space")]
    ZeroDimensional,
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("facet {0} is a dead-end")]
    DeadEnd(usize),
    #[error("witness form is not in the interior of the cone")]
    WitnessNotInterior,
    #[error("secondary cone is not generic for the subspace (rigidity {rigidity}, dim {dim})")]
    NotGeneric { rigidity: usize, dim: usize },
    #[error("repartitioning polytope check failed: {0}")]
    Repartitioning(String),
    #[error("subdivision is inconsistent: {0}")]
    InconsistentSubdivision(String),
    #[error("subspace contains no positive definite form")]
    NoDefiniteForm,
    #[error("gave up after {0} attempts")]
    TriesExhausted(usize),
    #[error("subspaces differ")]
    SubspaceMismatch,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("field element is zero")]
    ZeroElement,
    #[error("{0} does not divide {1}")]
    NotDivisor(usize, usize),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
