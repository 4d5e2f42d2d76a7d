use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building or verifying a construction.
///
/// Variants that reject a law carry the witness (basis indices, stages,
/// grid positions) at which the law failed. Stages are 1-based, basis
/// indices are 0-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("block dimensions must all be positive, got {0:?}")]
    InvalidBlocks(Vec<usize>),

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("input {index} is not a projection")]
    NotProjection { index: usize },

    #[error("map does not preserve adjoints at basis element {basis}")]
    NotStar { basis: usize },

    #[error("map is not multiplicative on basis pair ({left}, {right})")]
    NotMultiplicative { left: usize, right: usize },

    #[error("map is not anti-multiplicative on basis pair ({left}, {right})")]
    NotAntiMultiplicative { left: usize, right: usize },

    #[error("map is not unital")]
    NotUnital,

    #[error("map is not surjective: rank {rank} < target dimension {target}")]
    NotSurjective { rank: usize, target: usize },

    #[error("map is not contractive at stage {stage}")]
    NotContractive { stage: usize },

    #[error("element is not in the generated algebra")]
    NotInAlgebra,

    #[error("compatibility fails at stage {stage}, basis element {basis}")]
    Incompatible { stage: usize, basis: usize },

    #[error("{law} fails at basis element {basis}")]
    LawViolated { law: String, basis: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("projections {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("projections do not sum to the identity")]
    NotPartitionOfUnity,

    #[error("projection {0} is zero")]
    ZeroProjection(usize),

    #[error("grid fails the magic relations: {0}")]
    NotMagic(String),

    #[error("grid has nonzero defects; the operation needs exact row and column sums")]
    NonzeroDefects,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
