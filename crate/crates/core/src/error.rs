use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series is not normalized: f(1) = {0}, expected 1")]
    NotNormalized(Complex64),

    #[error("no zeros exist: f(n) = 0 for every n >= 2, so the polynomial is identically f(1)")]
    NoZeros,

    #[error("|F| = {abs:e} below guard {guard:e} on the contour at s = {at}")]
    BoundaryZero { at: Complex64, abs: f64, guard: f64 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("discriminant {0} is not fundamental")]
    NonFundamental(i64),

    #[error("quadrature stalled: {0}")]
    QuadratureStall(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
