use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("cell ({row}, {col}) lies outside the diagram {diagram}")]
    CellOutside { row: usize, col: usize, diagram: Partition },

    #[error("parameters sigma1={sigma1}, sigma2={sigma2} are inadmissible: k^2 + sigma1 k + sigma2 must be positive for every integer k")]
    Inadmissible { sigma1: String, sigma2: String },

    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: String },

    #[error("link parameters must satisfy r' > r > 0, got r'={r_prime}, r={r}")]
    ParameterOrder { r_prime: String, r: String },

    #[error("operation not supported for the {0} basis")]
    UnsupportedBasis(&'static str),

    #[error("truncation budget exhausted: {0}")]
    Truncation(String),

    #[error("sampled size {size} exceeds the table cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
