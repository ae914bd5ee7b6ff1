//! Monomial maps `x_i -> prod_j x_j^(A_ij)` on the torus of `P^N`.
//!
//! The dynamical degrees are `delta_k = rho(Λ^k A)`, so everything here is
//! integer linear algebra. The homogenizing variable is the last one: the
//! torus coordinates are `u_j = x_j / x_N`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::spectral::{spectral_radius_info, DEFAULT_POWER_CAP};
use crate::algebra::{AlgebraError, HomPoly, IntMatrix, RealEnclosure};
use crate::exec::Exec;
use crate::maps::{MapError, RationalMap};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MonomialError {
    #[error("exponent matrix is singular")]
    SingularMatrix,
    #[error("exponent matrix must be at least 1x1")]
    Empty,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("delta_{k} did not reach the requested tolerance")]
    ToleranceNotReached { k: usize, partial: Box<DegreeVector> },
    #[error("enclosures too wide to decide log-concavity at index {index}")]
    InconclusiveEnclosure { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    a: IntMatrix,
}

impl MonomialMap {
    pub fn new(a: IntMatrix) -> Result<Self, MonomialError> {
        if a.dim() == 0 {
            return Err(MonomialError::Empty);
        }
        if a.det().is_zero() {
            return Err(MonomialError::SingularMatrix);
        }
        Ok(MonomialMap { a })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MonomialError> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// The `n`-th iterate, whose exponent matrix is `A^n`.
    pub fn power(&self, n: u32) -> MonomialMap {
        MonomialMap { a: self.a.pow(n) }
    }

    /// Self-map of `P^N` agreeing with the monomial map on the torus.
    pub fn homogenize(&self) -> Result<RationalMap, MapError> {
        let (exps, degree) = homogenized_exponents(&self.a);
        let coords = exps
            .into_iter()
            .map(|e| HomPoly::monomial(e, BigInt::one()))
            .collect();
        let f = RationalMap::new(coords)?;
        debug_assert_eq!(f.degree(), degree);
        Ok(f)
    }

    /// `deg(f^n)` read off `A^n`; no polynomial arithmetic.
    pub fn degree_of_power(&self, n: u32) -> u32 {
        homogenized_degree(&self.a.pow(n))
    }

    /// Direct evaluation on a torus point with rational coordinates.
    pub fn eval_torus(&self, u: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n).fold(BigRational::one(), |acc, j| {
                    let e = self.a.get(i, j);
                    let p = u[j].pow(i32::try_from(e).expect("small exponent"));
                    acc * p
                })
            })
            .collect()
    }

    pub fn dynamical_degrees(&self, tol: &BigRational) -> Result<DegreeVector, MonomialError> {
        self.dynamical_degrees_with(tol, Exec::default())
    }

    /// `delta_k = rho(Λ^k A)` for `k = 0..=N`; the `k` are independent.
    pub fn dynamical_degrees_with(&self, tol: &BigRational, exec: Exec) -> Result<DegreeVector, MonomialError> {
        let n = self.dim();
        let results = exec.map_range(n, |i| {
            let ext = self.a.exterior_power(i + 1)?;
            spectral_radius_info(&ext, tol, DEFAULT_POWER_CAP)
        });
        let topological = self.a.det().abs();
        let mut deltas = vec![RealEnclosure::exact(BigRational::one())];
        let mut repeated = vec![false];
        let mut failed = None;
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(s) => {
                    deltas.push(s.enclosure);
                    repeated.push(s.dominant_repeated);
                }
                Err(AlgebraError::ToleranceNotReached { best, .. }) => {
                    failed.get_or_insert(i + 1);
                    deltas.push(best);
                    repeated.push(false);
                }
                Err(e) => return Err(e.into()),
            }
        }
        // Λ^N A = [det A]
        deltas[n] = RealEnclosure::from_integer(topological.clone());
        let v = DegreeVector {
            deltas,
            dominant_repeated: repeated,
            topological,
        };
        match failed {
            Some(k) if k < n => Err(MonomialError::ToleranceNotReached {
                k,
                partial: Box::new(v),
            }),
            _ => Ok(v),
        }
    }
}

/// Exponent vectors of the homogenized coordinates and their common degree.
fn homogenized_exponents(a: &IntMatrix) -> (Vec<Vec<u32>>, u32) {
    let n = a.dim();
    let mut raw: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..n).map(|j| i64::try_from(a.get(i, j)).expect("exponent fits i64")).collect();
            let s: i64 = row.iter().sum();
            row.push(-s);
            row
        })
        .collect();
    raw.push(vec![0; n + 1]);
    let mins: Vec<i64> = (0..=n).map(|k| raw.iter().map(|r| r[k]).min().expect("rows")).collect();
    let degree = u32::try_from(-mins.iter().sum::<i64>()).expect("degree fits u32");
    let exps = raw
        .iter()
        .map(|r| r.iter().zip(&mins).map(|(e, m)| (e - m) as u32).collect())
        .collect();
    (exps, degree)
}

/// `sum_k max_i(-e_ik)` over the homogenized exponent vectors, with the
/// last coordinate contributing zero.
fn homogenized_degree(a: &IntMatrix) -> u32 {
    let n = a.dim();
    let mut total = BigInt::zero();
    for k in 0..=n {
        let mut worst = BigInt::zero();
        for i in 0..n {
            let e = if k < n {
                a.get(i, k).clone()
            } else {
                -(0..n).map(|j| a.get(i, j).clone()).sum::<BigInt>()
            };
            let neg = -e;
            if neg > worst {
                worst = neg;
            }
        }
        total += worst;
    }
    u32::try_from(&total).expect("degree fits u32")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeVector {
    /// `[delta_0 = 1, delta_1, ..., delta_N]`.
    pub deltas: Vec<RealEnclosure>,
    /// Whether the spectral radius of `Λ^k A` is attained more than once.
    /// That happens exactly when `delta_(k-1) delta_(k+1) = delta_k^2`.
    pub dominant_repeated: Vec<bool>,
    #[serde(serialize_with = "ser_big")]
    pub topological: BigInt,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Concavity {
    /// `delta_(i-1) delta_(i+1) < delta_i^2`, separated by the enclosures.
    Holds,
    Equality,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogConcavityReport {
    /// Verdict for `i = 1..N-1`.
    pub checks: Vec<Concavity>,
    /// Index of the largest dynamical degree; the sequence rises to it and
    /// falls after it.
    pub peak: usize,
    pub unimodal: bool,
}

impl LogConcavityReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| *c != Concavity::Violated)
    }
}

pub fn check_log_concavity(d: &DegreeVector) -> Result<LogConcavityReport, MonomialError> {
    let n = d.deltas.len() - 1;
    let mut checks = Vec::new();
    for i in 1..n {
        let lhs = d.deltas[i - 1].mul_nonneg(&d.deltas[i + 1]);
        let rhs = d.deltas[i].pow_nonneg(2);
        let verdict = if lhs.upper() < rhs.lower() {
            Concavity::Holds
        } else if lhs.lower() > rhs.upper() {
            Concavity::Violated
        } else if d.dominant_repeated[i] || (lhs.is_exact() && rhs.is_exact() && lhs == rhs) {
            Concavity::Equality
        } else {
            return Err(MonomialError::InconclusiveEnclosure { index: i });
        };
        checks.push(verdict);
    }
    let mids: Vec<f64> = d.deltas.iter().map(RealEnclosure::midpoint_f64).collect();
    let top = mids.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peak = mids
        .iter()
        .position(|&m| m >= top * (1.0 - 1e-12))
        .unwrap_or(0);
    let slack = |a: f64, b: f64| a <= b * (1.0 + 1e-12);
    let unimodal = mids[..=peak].windows(2).all(|w| slack(w[0], w[1]))
        && mids[peak..].windows(2).all(|w| slack(w[1], w[0]));
    Ok(LogConcavityReport { checks, peak, unimodal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_hompoly;
    use crate::maps::{degree_sequence, DegreeBudget};
    use crate::point::ProjPoint;
    use num_traits::ToPrimitive;

    fn tol(e: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10).pow(e))
    }

    fn mm(rows: &[&[i64]]) -> MonomialMap {
        MonomialMap::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn homogenize_diagonal() {
        let f = mm(&[&[2, 0], &[0, 2]]).homogenize().unwrap();
        assert_eq!(f.to_string(), "[x^2, y^2, z^2]");
        let id = mm(&[&[1, 0], &[0, 1]]).homogenize().unwrap();
        assert_eq!(id.coords(), RationalMap::identity(2, BigInt::one()).coords());
    }

    #[test]
    fn homogenize_clears_negative_exponents() {
        // (u, v) -> (u / v, v)
        let m = mm(&[&[1, -1], &[0, 1]]);
        let f = m.homogenize().unwrap();
        let vars = ["x", "y", "z"];
        let want: Vec<_> = ["x*z", "y^2", "y*z"].iter().map(|s| parse_hompoly(s, &vars).unwrap()).collect();
        assert_eq!(f.coords(), want.as_slice());
        assert_eq!(m.degree_of_power(1), 2);
        let samples = [(2, 3), (-5, 7), (11, -2), (1, 13), (-4, -9)];
        for (a, b) in samples {
            let u = [BigRational::from_integer(a.into()), BigRational::from_integer(b.into())];
            let direct = m.eval_torus(&u);
            let img = f.eval(&ProjPoint::from_i64(&[a, b, 1]).unwrap()).unwrap();
            let c = img.coords();
            let last = BigRational::from_integer(c[2].clone());
            assert_eq!(BigRational::from_integer(c[0].clone()) / &last, direct[0]);
            assert_eq!(BigRational::from_integer(c[1].clone()) / &last, direct[1]);
        }
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert_eq!(
            MonomialMap::from_i64_rows(&[vec![1, 2], vec![2, 4]]),
            Err(MonomialError::SingularMatrix)
        );
    }

    #[test]
    fn matrix_route_matches_symbolic_composition() {
        let m = mm(&[&[2, 1], &[1, 1]]);
        let seq = degree_sequence(&m.homogenize().unwrap(), 4, DegreeBudget::default()).unwrap();
        let direct: Vec<u32> = (1..=4).map(|n| m.degree_of_power(n)).collect();
        assert_eq!(seq.degrees, direct);
        assert_eq!(mm(&[&[2, 0], &[0, 2]]).degree_of_power(3), 8);
        assert_eq!(mm(&[&[1, 0], &[0, 1]]).degree_of_power(9), 1);
    }

    #[test]
    fn golden_matrix_degrees() {
        let d = mm(&[&[2, 1], &[1, 1]]).dynamical_degrees(&tol(8)).unwrap();
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(d.deltas[1].contains_f64(phi2, 1e-12));
        assert_eq!(d.deltas[2], RealEnclosure::from_integer(BigInt::one()));
        let r = check_log_concavity(&d).unwrap();
        assert_eq!(r.checks, vec![Concavity::Holds]);
        assert_eq!(r.peak, 1);
    }

    #[test]
    fn diagonal_degrees() {
        let d = mm(&[&[2, 0], &[0, 3]]).dynamical_degrees(&tol(8)).unwrap();
        assert_eq!(d.deltas[1].midpoint_f64(), 3.0);
        assert_eq!(d.deltas[2].lower().to_f64(), Some(6.0));
        assert_eq!(d.topological, BigInt::from(6));
        let r = check_log_concavity(&d).unwrap();
        assert_eq!(r.checks, vec![Concavity::Holds]);
        assert_eq!(r.peak, 2);
        assert!(r.unimodal);
    }

    #[test]
    fn identity_gives_equalities() {
        let d = mm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).dynamical_degrees(&tol(8)).unwrap();
        assert!(d.deltas.iter().all(|e| e.is_exact() && e.lower().is_one()));
        let r = check_log_concavity(&d).unwrap();
        assert_eq!(r.checks, vec![Concavity::Equality, Concavity::Equality]);
    }

    #[test]
    fn complex_dominant_pair_is_an_equality() {
        // eigenvalues 1 +- 2i and 1: moduli sqrt5, sqrt5, 1
        let d = mm(&[&[1, -2, 0], &[2, 1, 0], &[0, 0, 1]]).dynamical_degrees(&tol(8)).unwrap();
        let r = check_log_concavity(&d).unwrap();
        assert_eq!(r.checks, vec![Concavity::Equality, Concavity::Holds]);
    }

    #[test]
    fn policies_agree() {
        let m = mm(&[&[2, 1, 0], &[1, 1, 1], &[0, 1, 3]]);
        let a = m.dynamical_degrees_with(&tol(8), Exec::Sequential).unwrap();
        let b = m.dynamical_degrees_with(&tol(8), Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
