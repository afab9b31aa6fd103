use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GospaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("brute-force oracle limited to {max_rows} rows and {max_cols} columns, got {rows}x{cols}")]
    OracleLimit {
        rows: usize,
        cols: usize,
        max_rows: usize,
        max_cols: usize,
    },

    #[error("covariance of component {component} is not positive semidefinite")]
    NotPositiveSemidefinite { component: usize },
}

pub type Result<T, E = GospaError> = std::result::Result<T, E>;
