use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RationalMap;
use crate::algebra::{Coeff, HomPoly};

const SAMPLE_RADIUS: i64 = 1_000_000;
/// Largest `N` for which the Jacobian determinant is expanded symbolically.
const SYMBOLIC_MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    Dominant,
    NotDominant,
    Inconclusive,
}

fn lift<C: Coeff>(one: &C, v: i64) -> C {
    let m = one.from_u64_like(v.unsigned_abs());
    if v < 0 {
        m.neg()
    } else {
        m
    }
}

/// Fraction-free determinant over an integral domain.
pub(crate) fn det_bareiss<C: Coeff>(mut m: Vec<Vec<C>>, one: &C) -> C {
    let n = m.len();
    let mut sign = false;
    let mut prev = one.clone();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return one.zero_like();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

fn partials<C: Coeff>(f: &RationalMap<C>) -> Vec<Vec<HomPoly<C>>> {
    let n = f.dim() + 1;
    f.coords()
        .iter()
        .map(|c| (0..n).map(|j| c.derivative(j)).collect())
        .collect()
}

fn one_of<C: Coeff>(f: &RationalMap<C>) -> C {
    f.coords()
        .iter()
        .find_map(|c| c.poly().any_coeff())
        .expect("maps have a nonzero coordinate")
        .one_like()
}

/// Determinant of the homogeneous Jacobian `(∂f_i/∂x_j)`, expanded over
/// permutations. A homogeneous map is dominant in characteristic zero iff
/// this is nonzero.
pub fn jacobian_determinant<C: Coeff>(f: &RationalMap<C>) -> HomPoly<C> {
    let n = f.dim() + 1;
    let jac = partials(f);
    let one = one_of(f);
    let degree = n as u32 * f.degree().saturating_sub(1);
    let mut acc = HomPoly::zero(n, degree);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd = false;
    // Heap's algorithm, tracking parity
    let mut c = vec![0usize; n];
    let term = |perm: &[usize], odd: bool, acc: &mut HomPoly<C>| {
        let mut t = HomPoly::monomial(vec![0; n], if odd { one.neg() } else { one.clone() });
        for (i, &j) in perm.iter().enumerate() {
            if jac[i][j].is_zero() {
                return;
            }
            t = t.mul(&jac[i][j]).expect("same arity");
        }
        *acc = acc.add(&t).expect("same degree");
    };
    term(&perm, odd, &mut acc);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            term(&perm, odd, &mut acc);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

/// Dominance test: a nonzero Jacobian determinant at a random point is a
/// witness. For `N <= 3` the symbolic determinant settles the remaining
/// cases. Over `F_p` a vanishing Jacobian only means the map is not
/// separable, so callers there treat `NotDominant` as unverified.
pub fn is_dominant<C: Coeff>(f: &RationalMap<C>, trials: usize, seed: u64) -> Dominance {
    let n = f.dim() + 1;
    let jac = partials(f);
    let one = one_of(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let pt: Vec<C> = (0..n)
            .map(|_| lift(&one, rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS)))
            .collect();
        let m: Vec<Vec<C>> = jac
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.eval(&pt).unwrap_or_else(|| one.zero_like()))
                    .collect()
            })
            .collect();
        if !det_bareiss(m, &one).is_zero() {
            return Dominance::Dominant;
        }
    }
    if f.dim() <= SYMBOLIC_MAX_DIM {
        if jacobian_determinant(f).is_zero() {
            Dominance::NotDominant
        } else {
            Dominance::Dominant
        }
    } else {
        Dominance::Inconclusive
    }
}
