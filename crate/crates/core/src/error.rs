use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right} variables")]
    RankMismatch { left: usize, right: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("inexact division")]
    InexactDivision,

    #[error("negative power of variable x{var} whose image is not a unit monomial")]
    NegativePowerOfNonUnit { var: usize },

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,

    #[error("quiver has a loop at vertex {0}")]
    Loop(usize),

    #[error("quiver has an oriented 2-cycle between {0} and {1}")]
    TwoCycle(usize, usize),

    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("representations live over different quivers")]
    QuiverMismatch,

    #[error("representations live over different fields")]
    FieldMismatch,

    #[error("decorated representations live over different quivers with potential")]
    QpMismatch,

    #[error("dimension vector out of range")]
    DimensionOutOfRange,

    #[error("operation requires a representation over a prime field")]
    NotPrimeField,

    #[error("interpolation inconsistent: predicted {predicted} points over F_{prime}, counted {counted}")]
    InterpolationInconsistent { prime: u64, predicted: String, counted: u64 },

    #[error("prime budget of {budget} too small, {needed} primes needed")]
    PrimeBudgetExceeded { budget: usize, needed: usize },

    #[error("vertex {0} is neither a sink nor a source as required")]
    NotSinkOrSource(usize),

    #[error("quiver is not acyclic")]
    NotAcyclic,

    #[error("quiver is not of Dynkin type")]
    NotDynkin,

    #[error("outside the finite-type regime: {0}")]
    OutsideFiniteType(String),

    #[error("oriented 2-cycle through vertex {0}")]
    TwoCycleThroughVertex(usize),

    #[error("relation violated: {0}")]
    RelationViolation(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
