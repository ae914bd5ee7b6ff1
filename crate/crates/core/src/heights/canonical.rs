//! Canonical heights `lim h(f^n P) / d^n` with explicit tail bounds.
//!
//! If `|h(f(Q)) - d h(Q)| <= C` for all `Q`, then `h(f^n P) / d^n` is within
//! `C / (d^n (d - 1))` of the limit. On `P^1` both halves of `C` are
//! certified: the upper half by the triangle inequality, the lower half by a
//! Bezout identity `A F + B G = Res(F, G) y^(2d-1)` (and the same for
//! `x^(2d-1)`). On `P^N` with `N >= 2` only the upper half is certified; the
//! lower half is the largest drop observed along the orbit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{orbit, HeightError, OrbitRecord, Termination};
use crate::algebra::enclosure::ln_bigint;
use crate::algebra::IntMatrix;
use crate::maps::RationalMap;
use crate::point::ProjPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CertifiedP1,
    CoefficientUpper,
    Empirical,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightBounds {
    /// `h(f(Q)) - d h(Q) <= upper`.
    pub upper: f64,
    /// `d h(Q) - h(f(Q)) <= lower`, when certified.
    pub lower: Option<f64>,
    #[serde(serialize_with = "ser_opt_big")]
    pub resultant: Option<BigInt>,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_some(&b.to_string()),
        None => s.serialize_none(),
    }
}

impl HeightBounds {
    pub fn constant(&self) -> Option<f64> {
        self.lower.map(|l| l.max(self.upper).max(0.0))
    }
}

/// Coefficients of a binary form `sum c_i x^i y^(d-i)`, index `i`.
fn binary_coeffs(f: &RationalMap, k: usize) -> Vec<BigInt> {
    let c = &f.coords()[k];
    let d = f.degree() as usize;
    let mut out = vec![BigInt::zero(); d + 1];
    for (e, v) in c.poly().terms() {
        out[e[0] as usize] = v.clone();
    }
    out
}

/// Sylvester matrix of `(F, G)` acting on `(A, B)`, both of degree `d - 1`.
/// Row `k` is the coefficient of `x^k y^(2d-1-k)` in `A F + B G`.
fn sylvester(fc: &[BigInt], gc: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = fc.len() - 1;
    let mut s = vec![vec![BigInt::zero(); 2 * d]; 2 * d];
    for j in 0..d {
        for i in 0..=d {
            s[i + j][j] = fc[i].clone();
            s[i + j][d + j] = gc[i].clone();
        }
    }
    s
}

/// Solve `S v = b` over the rationals; `S` must be invertible.
fn solve_rational(s: &[Vec<BigInt>], b: &[BigInt]) -> Vec<BigRational> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = s
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .chain(std::iter::once(bi))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("invertible");
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let t = &m[col][c] * &factor;
                    m[r][c] -= t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

/// Height-change constants for `f`. On `P^1` the lower half is certified;
/// `NotMorphism` if the resultant vanishes.
pub fn height_bounds(f: &RationalMap) -> Result<HeightBounds, HeightError> {
    let l1 = |k: usize| -> BigInt { f.coords()[k].poly().terms().map(|(_, c)| c.abs()).sum() };
    let upper = (0..=f.dim()).map(|k| ln_bigint(&l1(k))).fold(0.0, f64::max);
    if f.dim() != 1 {
        return Ok(HeightBounds {
            upper,
            lower: None,
            resultant: None,
        });
    }
    let fc = binary_coeffs(f, 0);
    let gc = binary_coeffs(f, 1);
    let s = sylvester(&fc, &gc);
    let res = IntMatrix::from_rows(&s).expect("square").det();
    if res.is_zero() {
        return Err(HeightError::NotMorphism);
    }
    let n = s.len();
    let mut worst = BigInt::zero();
    for target in [0, n - 1] {
        let mut b = vec![BigInt::zero(); n];
        b[target] = res.clone();
        let v = solve_rational(&s, &b);
        let norm: BigInt = v
            .iter()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer().abs()
            })
            .sum();
        if norm > worst {
            worst = norm;
        }
    }
    Ok(HeightBounds {
        upper,
        lower: Some(ln_bigint(&worst)),
        resultant: Some(res),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalHeightValue {
    pub value: f64,
    pub error_bound: f64,
    pub n_used: usize,
    pub bound_kind: BoundKind,
    /// The requested tolerance was met before the budget ran out.
    pub tolerance_met: bool,
    /// The constant `C` behind the tail bound.
    pub constant: f64,
    pub preperiodic: bool,
}

impl CanonicalHeightValue {
    /// Certified lower bound `value - error_bound`.
    pub fn lower(&self) -> f64 {
        (self.value - self.error_bound).max(0.0)
    }
}

fn tail(c: f64, d: f64, n: usize) -> f64 {
    c / (d.powi(n as i32) * (d - 1.0))
}

/// Smallest `n` with `C / (d^n (d-1)) <= tol`.
/// Short orbits are always followed this far so small cycles are seen.
const MIN_STEPS: usize = 8;

fn steps_needed(c: f64, d: f64, tol: f64) -> usize {
    let mut n = MIN_STEPS;
    while tail(c, d, n) > tol && n < 4096 {
        n += 1;
    }
    n
}

fn from_orbit(rec: &OrbitRecord, c: f64, kind: BoundKind, tol: f64) -> CanonicalHeightValue {
    let d = rec.map_degree as f64;
    if rec.is_preperiodic() {
        return CanonicalHeightValue {
            value: 0.0,
            error_bound: 0.0,
            n_used: rec.last_n(),
            bound_kind: kind,
            tolerance_met: true,
            constant: c,
            preperiodic: true,
        };
    }
    let n = rec.last_n();
    let err = tail(c, d, n);
    CanonicalHeightValue {
        value: rec.heights[n] / d.powi(n as i32),
        error_bound: err,
        n_used: n,
        bound_kind: kind,
        tolerance_met: err <= tol,
        constant: c,
        preperiodic: false,
    }
}

/// Canonical height of `p` for a morphism `f` of degree `d >= 2`.
pub fn canonical_height(
    f: &RationalMap,
    p: &ProjPoint,
    tol: f64,
    bit_budget: u64,
) -> Result<CanonicalHeightValue, HeightError> {
    if f.degree() < 2 {
        return Err(HeightError::DegreeNotPolarized { degree: f.degree() });
    }
    let d = f.degree() as f64;
    let bounds = height_bounds(f)?;
    match bounds.constant() {
        Some(c) => {
            let n = steps_needed(c, d, tol);
            let rec = orbit(f, p, n, bit_budget)?;
            if let Termination::Indeterminate { n } = rec.termination {
                return Err(HeightError::NotEventuallyDefined { n });
            }
            Ok(from_orbit(&rec, c, BoundKind::CertifiedP1, tol))
        }
        None => {
            // lower half from the orbit itself, so iterate as far as allowed
            let n = steps_needed(bounds.upper.max(1.0), d, tol);
            let rec = orbit(f, p, n, bit_budget)?;
            if let Termination::Indeterminate { n } = rec.termination {
                return Err(HeightError::NotEventuallyDefined { n });
            }
            let observed = rec
                .heights
                .windows(2)
                .map(|w| d * w[0] - w[1])
                .fold(0.0, f64::max);
            let c = bounds.upper.max(observed);
            Ok(from_orbit(&rec, c, BoundKind::Empirical, tol))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preperiodicity {
    Preperiodic { entry: usize, period: usize },
    NotWithinBudget,
    /// The certified canonical height is at least `lower_bound > 0`.
    HeightEscape { lower_bound: f64 },
}

pub fn is_preperiodic(f: &RationalMap, p: &ProjPoint, n_max: usize, bit_budget: u64) -> Result<Preperiodicity, HeightError> {
    let rec = orbit(f, p, n_max, bit_budget)?;
    if let Termination::CycleDetected { entry, period } = rec.termination {
        return Ok(Preperiodicity::Preperiodic { entry, period });
    }
    if let Termination::Indeterminate { n } = rec.termination {
        return Err(HeightError::NotEventuallyDefined { n });
    }
    if f.dim() != 1 || f.degree() < 2 {
        return Ok(Preperiodicity::NotWithinBudget);
    }
    let c = height_bounds(f)?.constant().expect("certified on P^1");
    let d = f.degree() as f64;
    let best = rec
        .heights
        .iter()
        .enumerate()
        .map(|(n, h)| (h - c / (d - 1.0)) / d.powi(n as i32))
        .fold(f64::NEG_INFINITY, f64::max);
    // keep a margin for the floating-point logarithms
    if best > 1e-9 {
        Ok(Preperiodicity::HeightEscape { lower_bound: best })
    } else {
        Ok(Preperiodicity::NotWithinBudget)
    }
}

/// `C / (d - 1)` as a float, for callers that bound `|h - ĥ|` directly.
pub fn height_difference_bound(f: &RationalMap) -> Option<f64> {
    let c = height_bounds(f).ok()?.constant()?;
    Some(c / (f.degree() as f64 - 1.0))
}
