//! Exact arithmetic substrate: coefficient rings, sparse and homogeneous
//! polynomials, gcds, integer matrices and spectral enclosures.

pub mod enclosure;
pub mod gcd;
mod heugcd;
pub mod hompoly;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod ring;
pub mod spectral;
pub mod upoly;

use thiserror::Error;

pub use enclosure::RealEnclosure;
pub use gcd::multi_gcd;
pub use hompoly::HomPoly;
pub use matrix::IntMatrix;
pub use mpoly::MPoly;
pub use ring::{Coeff, Fp};
pub use spectral::spectral_radius;

/// Reduced rational with positive denominator.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("empty input")]
    EmptyInput,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("exterior power index {k} out of range 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("tolerance not reached after {iterations} iterations; best enclosure {best}")]
    ToleranceNotReached { iterations: usize, best: RealEnclosure },
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
}
