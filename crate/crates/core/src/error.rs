use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("window rows {row0}..{row1}, cols {col0}..{col1} out of bounds for a {nrows}x{ncols} matrix")]
    WindowOutOfBounds {
        row0: usize,
        col0: usize,
        row1: usize,
        col1: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("destination window overlaps an operand")]
    Aliasing,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("inconsistent decomposition: {0}")]
    InconsistentDecomposition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
