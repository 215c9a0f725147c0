use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("index {index} outside [{min}, {max}]")]
    IndexOutOfRange { index: i64, min: i64, max: i64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("kernel kind mismatch: expected {expected}, found {found}")]
    KernelKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("path enumeration needs {paths} paths, limit is {limit}")]
    EnumerationGuard { paths: u128, limit: u128 },

    #[error("state space of {size} entries exceeds the limit {limit}")]
    MemoryGuard { size: u128, limit: u128 },

    #[error("grid K = {k} exceeds the dense limit {limit}")]
    DenseGuard { k: usize, limit: usize },

    #[error(
        "wave packet wraps around the grid: displacement {displacement:.4} + 4 widths {spread:.4} >= extent {extent:.4}"
    )]
    WrapAround {
        displacement: f64,
        spread: f64,
        extent: f64,
    },

    #[error(
        "wave packet leaks onto the grid edge: {fraction:.3e} of the probability within 5 sites"
    )]
    PacketLeak { fraction: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("{what} not converged: change {change:.3e} exceeds {tolerance:.1e}")]
    NotConverged {
        what: &'static str,
        change: f64,
        tolerance: f64,
    },
}

impl Error {
    /// True for errors raised by size or geometry guards rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::EnumerationGuard { .. }
                | Error::MemoryGuard { .. }
                | Error::DenseGuard { .. }
                | Error::WrapAround { .. }
                | Error::PacketLeak { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
