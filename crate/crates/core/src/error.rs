use thiserror::Error;

/// Errors raised by the fitting, selection and preprocessing routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("empty column set")]
    EmptyColumnSet,

    #[error("column index {index} out of range for {n_cols} columns")]
    ColumnOutOfRange { index: usize, n_cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The total scatter matrix of the requested column subset is rank deficient.
    #[error("total scatter matrix is singular (rank {rank} < {dim})")]
    SingularScatter { rank: usize, dim: usize },

    /// Partial Wilks' lambda is 0/0 once the running lambda has reached zero.
    #[error("partial Wilks' lambda is ill-defined: lambda without the candidate is zero")]
    IllDefinedPartialLambda,

    #[error("nonpositive degrees of freedom: {0}")]
    NonPositiveDegreesOfFreedom(i64),

    /// The effective class count J' = J - V has dropped to 1: no trace can be added.
    #[error("maximum Pillai's trace reached (effective class count {j_effective})")]
    MaxTraceReached { j_effective: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("all columns are constant")]
    AllColumnsConstant,

    #[error("invalid cost matrix: {0}")]
    InvalidCostMatrix(String),

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("column '{0}' has no observed values")]
    AllMissing(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("unsupported model version {0}")]
    UnsupportedVersion(u32),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialization(err.to_string())
    }
}
