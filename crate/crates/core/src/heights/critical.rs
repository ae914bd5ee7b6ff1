//! Critical points of maps `P^1 -> P^1` and the critical height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{canonical_height, CanonicalHeightValue, HeightError};
use crate::algebra::MPoly;
use crate::maps::RationalMap;
use crate::point::ProjPoint;

/// Rational root candidates are only enumerated below this size.
const MAX_FACTOR_TARGET: u64 = 1 << 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub point: ProjPoint,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoints {
    pub rational: Vec<CriticalPoint>,
    /// Degrees of what is left after removing rational roots.
    pub irrational_factor_degrees: Vec<u32>,
}

impl CriticalPoints {
    pub fn total_multiplicity(&self) -> u32 {
        self.rational.iter().map(|c| c.multiplicity).sum::<u32>() + self.irrational_factor_degrees.iter().sum::<u32>()
    }
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&v| v <= MAX_FACTOR_TARGET)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

fn linear_form(q: &BigInt, p: &BigInt) -> MPoly<BigInt> {
    // q x - p y
    MPoly::from_terms(2, [(vec![1, 0], q.clone()), (vec![0, 1], -p)])
}

/// Zeros of the Jacobian `F_x G_y - F_y G_x`, a binary form of degree
/// `2d - 2` whose roots are the critical points with multiplicity.
pub fn critical_points_p1(f: &RationalMap) -> Result<CriticalPoints, HeightError> {
    if f.dim() != 1 {
        return Err(HeightError::NotP1 { dim: f.dim() });
    }
    if f.degree() < 2 {
        return Err(HeightError::DegreeNotPolarized { degree: f.degree() });
    }
    let (fp, gp) = (f.coords()[0].poly(), f.coords()[1].poly());
    let jac = fp.derivative(0).mul(&gp.derivative(1)).sub(&fp.derivative(1).mul(&gp.derivative(0)));
    if jac.is_zero() {
        return Err(HeightError::DegenerateMap);
    }
    let mut rational = Vec::new();
    let shift = jac.monomial_content().expect("nonzero");
    let mut rest = jac.div_monomial(&shift);
    // x^a vanishes at [0,1], y^b at [1,0]
    if shift[0] > 0 {
        rational.push(CriticalPoint {
            point: ProjPoint::from_i64(&[0, 1]).expect("valid"),
            multiplicity: shift[0],
        });
    }
    if shift[1] > 0 {
        rational.push(CriticalPoint {
            point: ProjPoint::from_i64(&[1, 0]).expect("valid"),
            multiplicity: shift[1],
        });
    }
    let m = rest.total_degree().unwrap_or(0);
    if m > 0 {
        let lead = rest.coeff(&[m, 0]).cloned().unwrap_or_default();
        let tail = rest.coeff(&[0, m]).cloned().unwrap_or_default();
        if let (Some(qs), Some(ps)) = (divisors(&lead), divisors(&tail)) {
            for &q in &qs {
                for &p in &ps {
                    if p.gcd(&q) != 1 {
                        continue;
                    }
                    for sign in [1i64, -1] {
                        let (pb, qb) = (BigInt::from(p) * sign, BigInt::from(q));
                        let lin = linear_form(&qb, &pb);
                        let mut mult = 0;
                        while let Some(quot) = rest.div_exact(&lin) {
                            rest = quot;
                            mult += 1;
                        }
                        if mult > 0 {
                            rational.push(CriticalPoint {
                                point: ProjPoint::new(vec![pb, qb]).expect("q > 0"),
                                multiplicity: mult,
                            });
                        }
                    }
                }
            }
        }
    }
    let left = rest.total_degree().unwrap_or(0);
    rational.sort_by(|a, b| a.point.coords().cmp(b.point.coords()));
    Ok(CriticalPoints {
        rational,
        irrational_factor_degrees: if left > 0 { vec![left] } else { Vec::new() },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalHeight {
    /// Sum of canonical heights over rational critical points, with
    /// multiplicity.
    pub value: f64,
    pub error_bound: f64,
    pub critical_points_used: Vec<CriticalPoint>,
    pub heights: Vec<CanonicalHeightValue>,
    /// The value is partial: some critical points are not rational.
    pub irrational_criticals_present: bool,
    /// `Some(true)` when every critical point is rational and preperiodic,
    /// `Some(false)` when one has certified positive height.
    pub pcf: Option<bool>,
}

pub fn critical_height_p1(f: &RationalMap, tol: f64, bit_budget: u64) -> Result<CriticalHeight, HeightError> {
    let crit = critical_points_p1(f)?;
    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut heights = Vec::new();
    for c in &crit.rational {
        let h = canonical_height(f, &c.point, tol, bit_budget)?;
        value += c.multiplicity as f64 * h.value;
        error_bound += c.multiplicity as f64 * h.error_bound;
        heights.push(h);
    }
    let irrational = !crit.irrational_factor_degrees.is_empty();
    let pcf = if heights.iter().any(|h| h.lower() > 0.0) {
        Some(false)
    } else if !irrational && heights.iter().all(|h| h.preperiodic) {
        Some(true)
    } else {
        None
    };
    Ok(CriticalHeight {
        value,
        error_bound,
        critical_points_used: crit.rational,
        heights,
        irrational_criticals_present: irrational,
        pcf,
    })
}
