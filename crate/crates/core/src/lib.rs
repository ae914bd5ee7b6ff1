//! Degree growth, dynamical degrees and heights for rational self-maps of
//! projective space, computed with exact integer arithmetic.
//!
//! The crate is organized by subsystem:
//!
//! * [`algebra`]: integers, rationals, homogeneous polynomials, gcds and
//!   integer-matrix spectra.
//! * [`maps`]: rational maps of `P^N`, their composition, degree sequences
//!   and dynamical-degree estimates.
//! * [`monomial`]: monomial maps through their exponent matrices.
//! * [`heights`]: Weil heights, orbits, arithmetic degrees, canonical and
//!   critical heights.
//! * [`modp`]: reduction of maps modulo primes.
//! * [`gcd_height`]: heights relative to subvarieties of codimension two
//!   and higher.
//!
//! With the `parallel` feature (on by default) the independent sweeps run on
//! rayon; see [`exec`].

pub mod algebra;
pub mod exec;
pub mod gcd_height;
pub mod heights;
pub mod maps;
pub mod modp;
pub mod monomial;
pub mod point;
pub mod series;

pub use algebra::{BigRat, HomPoly, IntMatrix, RealEnclosure};
pub use maps::RationalMap;
pub use point::ProjPoint;
