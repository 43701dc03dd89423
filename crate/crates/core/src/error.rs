use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge list contains a cycle (edge {edge}: {a} - {b})")]
    CycleDetected { edge: usize, a: String, b: String },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("edge {a} - {b} is listed more than once")]
    DuplicateEdge { a: String, b: String },

    #[error("propagation time must be positive, got {0}")]
    NonPositiveTime(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("time vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    /// Two distinct multiplicity vectors evaluated to (numerically) the same
    /// time. The edge times are not linearly independent over the rationals,
    /// or sit too close to a rational relation for double precision.
    #[error("basis collision: {a:?} and {b:?} both evaluate to ~{value}")]
    BasisCollision { a: Vec<u32>, b: Vec<u32>, value: f64 },

    #[error("horizon must be non-negative, got {0}")]
    HorizonNegative(f64),

    #[error("inequality coefficients must be positive, got {0}")]
    NonPositiveCoefficient(f64),

    #[error("inequality system has no variables")]
    EmptySystem,

    /// A lattice point or event time lies within the guard band of the
    /// bound without hitting it exactly.
    #[error("lattice point within guard band of bound {bound} (slack {slack:e})")]
    BoundaryAmbiguity { bound: f64, slack: f64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("edge subset {mask:#b} is not valid here: {reason}")]
    InvalidSubset { mask: u64, reason: String },

    #[error("invalid branch: {0}")]
    InvalidBranch(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("least-squares system is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
