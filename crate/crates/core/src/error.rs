use thiserror::Error;

/// Errors raised by the model, geometry, solver, oracle and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFiniteEntry(String),

    #[error("PSD cone with q = {q} acts on {expected} rows, but the problem has {got}")]
    PsdDimInvalid {
        q: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("matrix is not symmetric (max deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("Dykstra projection did not converge within {0} sweeps")]
    DykstraNoConvergence(usize),

    #[error("operation requires a nonnegative-orthant cone, got {0}")]
    WrongCone(String),

    #[error("the oracle supports at most 3 decision variables, got {0}")]
    DimensionTooLarge(usize),

    #[error("robust feasibility persists at alpha = {0}; radius estimate is unbounded")]
    UnboundedEstimate(f64),

    #[error("invalid uncertainty radii: {0}")]
    InvalidRadii(String),

    #[error("line {line}: label {label:?} is not -1 or 1")]
    BadLabels { line: usize, label: String },

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid training set: {0}")]
    InvalidTrainingSet(String),

    #[error("schema error: {0}")]
    SchemaError(String),

    #[error("SDPA export is not available for the {0} base")]
    UnsupportedBase(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
