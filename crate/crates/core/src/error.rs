use thiserror::Error;

/// Errors raised by measure, transport and dual-frame computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("matrix is numerically singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("bad weights: {0}")]
    BadWeights(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("no image supplied for atom {index}")]
    MissingImage { index: usize },

    #[error("not a frame: smallest frame-operator eigenvalue is {lower_bound:e}")]
    NotAFrame { lower_bound: f64 },

    #[error("marginal mismatch: {0}")]
    MarginalMismatch(String),

    #[error("invalid coupling plan: {0}")]
    InvalidPlan(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("||A - Id|| = {deviation} is not below 1")]
    DeviationTooLarge { deviation: f64 },

    #[error("coupling is not an approximate dual (deviation {deviation})")]
    NotApproximate { deviation: f64 },

    #[error("coupling is not an exact dual (deviation {deviation:e})")]
    NotExactDual { deviation: f64 },

    #[error("mixed frame operator is singular")]
    SingularMixedOperator,

    #[error("couplings do not share a source measure")]
    SourceMismatch,

    #[error("perturbed measure is not a frame (lower bound {lower_bound:e})")]
    EtaNotFrame { lower_bound: f64 },

    #[error("too few samples: {samples} < dimension {dim}")]
    TooFewSamples { samples: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
