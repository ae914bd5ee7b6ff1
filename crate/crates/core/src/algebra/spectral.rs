//! Certified enclosures of the spectral radius of an integer matrix.
//!
//! First the power sandwich
//! `(|tr A^m| / n)^(1/m) <= rho(A) <= ||A^m||^(1/m)` is tightened by
//! doubling `m`. When that is not narrow enough, the enclosure is refined by
//! Sturm bisection on `q(t) = chi(t^2)`, where `chi` is the characteristic
//! polynomial of `A (x) A`. The eigenvalues of the Kronecker square are the
//! products `l_i l_j`, so `rho^2 = l_max * conj(l_max)` is its largest real
//! eigenvalue and `rho` is the largest real root of `q`, whether the dominant
//! eigenvalue is real or not.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::enclosure::{nth_root_lower, nth_root_upper, RealEnclosure};
use super::matrix::IntMatrix;
use super::upoly::{max_real_root, UPoly};
use super::AlgebraError;

pub const DEFAULT_POWER_CAP: u32 = 64;
const MAX_BISECTIONS: usize = 4000;

#[derive(Clone, Debug)]
pub struct SpectralRadius {
    pub enclosure: RealEnclosure,
    /// More than one eigenvalue (with multiplicity) attains the spectral
    /// radius. Decided exactly.
    pub dominant_repeated: bool,
}

fn sandwich(a: &IntMatrix, tol: &BigRational, cap: u32) -> (BigRational, BigRational) {
    let n = BigRational::from_integer(BigInt::from(a.dim()));
    let mut power = a.clone();
    let mut m = 1u32;
    let mut best_lo = BigRational::zero();
    let mut best_hi: Option<BigRational> = None;
    loop {
        let hi = nth_root_upper(&BigRational::from_integer(power.norm_inf()), m);
        let tr = power.trace().abs();
        let lo = if tr.is_zero() {
            BigRational::zero()
        } else {
            nth_root_lower(&(BigRational::from_integer(tr) / &n), m)
        };
        if lo > best_lo {
            best_lo = lo;
        }
        best_hi = Some(match best_hi {
            Some(h) if h < hi => h,
            _ => hi,
        });
        let h = best_hi.as_ref().expect("set");
        if h - &best_lo <= *tol || m >= cap {
            break;
        }
        power = power.mul(&power);
        m *= 2;
    }
    let hi = best_hi.expect("set");
    // guard against rounding in the root bounds crossing over
    if best_lo > hi {
        (hi.clone(), hi)
    } else {
        (best_lo, hi)
    }
}

/// Spectral radius enclosure and dominant-multiplicity flag.
pub fn spectral_radius_info(
    a: &IntMatrix,
    tol: &BigRational,
    power_cap: u32,
) -> Result<SpectralRadius, AlgebraError> {
    if !tol.is_positive() {
        return Err(AlgebraError::BadTolerance);
    }
    if a.dim() == 0 {
        return Ok(SpectralRadius {
            enclosure: RealEnclosure::exact(BigRational::zero()),
            dominant_repeated: false,
        });
    }
    let (lo, hi) = sandwich(a, tol, power_cap);
    let q = UPoly::from_ints(&a.kron_self().char_poly()).compose_square();
    let root = max_real_root(&q, lo, hi, tol, MAX_BISECTIONS);
    let enclosure = RealEnclosure::new(root.lower, root.upper);
    if root.exact.is_none() && enclosure.width() > *tol {
        return Err(AlgebraError::ToleranceNotReached {
            iterations: root.iterations,
            best: enclosure,
        });
    }
    Ok(SpectralRadius {
        enclosure,
        dominant_repeated: root.repeated,
    })
}

/// Enclosure of the spectral radius with width at most `tol`.
pub fn spectral_radius(a: &IntMatrix, tol: &BigRational) -> Result<RealEnclosure, AlgebraError> {
    spectral_radius_info(a, tol, DEFAULT_POWER_CAP).map(|s| s.enclosure)
}
