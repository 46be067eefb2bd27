use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a strict partition: {0:?} (parts must be positive and strictly decreasing)")]
    NotStrict(Vec<u32>),

    #[error("not a plane partition: {0}")]
    NotAPlanePartition(String),

    #[error("diagonal {offset} is not strict: {parts:?}")]
    DiagonalNotStrict { offset: i64, parts: Vec<u32> },

    #[error("{what} = {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("tableau enumeration exceeded {cap} tableaux")]
    ShapeTooLarge { cap: u64 },

    #[error("pole on product: a specialization pair multiplies to 1")]
    PoleOnProduct,

    #[error("series window too small: exponent {exponent} requested, window is [{lo}, {hi}]")]
    WindowTooSmall { exponent: i64, lo: i64, hi: i64 },

    #[error("matrix of dimension {dim} is too large for this routine (max {max})")]
    TooLarge { dim: usize, max: usize },

    #[error("Pfaffian requires an even dimension, got {0}")]
    OddDimension(usize),

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotStrict(_) => "NotStrict",
            Error::NotAPlanePartition(_) => "NotAPlanePartition",
            Error::DiagonalNotStrict { .. } => "DiagonalNotStrict",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::ShapeTooLarge { .. } => "ShapeTooLarge",
            Error::PoleOnProduct => "PoleOnProduct",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::TooLarge { .. } => "TooLarge",
            Error::OddDimension(_) => "OddDimension",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
