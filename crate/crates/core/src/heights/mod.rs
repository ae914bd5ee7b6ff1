//! Weil heights, orbits and the height-growth estimators.

mod arith;
mod canonical;
mod critical;
mod orbit;

use thiserror::Error;

use crate::algebra::enclosure::ln_bigint;
use crate::maps::MapError;
use crate::point::ProjPoint;

pub use arith::{
    arith_degree_estimate, shibata_ell_estimate, shibata_fit_series, ArithmeticDegreeEstimate, Convergence,
    NLogNDiagnostic, ShibataEstimate,
};
pub use canonical::{
    canonical_height, height_bounds, height_difference_bound, is_preperiodic, BoundKind, CanonicalHeightValue, HeightBounds,
    Preperiodicity,
};
pub use critical::{critical_height_p1, critical_points_p1, CriticalHeight, CriticalPoint, CriticalPoints};
pub use orbit::{orbit, OrbitRecord, Termination};

/// Heights below this are treated as zero by the estimators.
pub const HEIGHT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HeightError {
    #[error("need at least {needed} usable heights, got {found}")]
    Insufficient { needed: usize, found: usize },
    #[error("height at n = {n} is not positive")]
    NonpositiveHeights { n: usize },
    #[error("orbit left the domain of definition at step {n}")]
    NotEventuallyDefined { n: usize },
    #[error("degree {degree} does not polarize: need degree > 1")]
    DegreeNotPolarized { degree: u32 },
    #[error("the coordinates have a common zero, so this is not a morphism")]
    NotMorphism,
    #[error("Jacobian vanishes identically")]
    DegenerateMap,
    #[error("expected a map of P^1, got P^{dim}")]
    NotP1 { dim: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// `log max |x_i|` of the canonical representative.
pub fn weil_height(p: &ProjPoint) -> f64 {
    ln_bigint(&p.max_abs())
}
