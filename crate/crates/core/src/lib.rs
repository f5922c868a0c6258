//! Partial sums `F_N(s) = Σ_{n<=N} f(n) n^{-s}` of L-functions attached to
//! k-bounded multiplicative functions: coefficients, zeros, counting
//! formulas, zero density and logarithmic mean values.

pub mod error;
pub mod multcore;
pub mod numberfield;
pub mod dirichletpoly;
pub mod zeroengine;
pub mod halasz;
pub mod mollifier;
pub mod funcspec;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use funcspec::FunctionSpec;

/// Library version, embedded in every CLI artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
