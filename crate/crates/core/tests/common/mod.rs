#![allow(dead_code)]

use deglab_core::algebra::{HomPoly, MPoly};
use deglab_core::maps::{MapDocument, RationalMap};
use deglab_core::{IntMatrix, ProjPoint};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Homogeneous polynomial of degree `d` in `n` variables, small coefficients,
/// possibly zero.
pub fn hompoly(n: usize, d: u32) -> impl Strategy<Value = HomPoly> {
    let ms = monomials(n, d);
    let k = ms.len();
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], k).prop_map(move |cs| {
        let terms = ms.iter().cloned().zip(cs).filter(|(_, c)| *c != 0).map(|(e, c)| (e, BigInt::from(c)));
        HomPoly::new(MPoly::from_terms(n, terms), d).unwrap()
    })
}

pub fn nonzero_hompoly(n: usize, d: u32) -> impl Strategy<Value = HomPoly> {
    hompoly(n, d).prop_filter("nonzero", |p| !p.is_zero())
}

/// A map of `P^2` of degree 1..=3 with jointly coprime coordinates.
pub fn map2() -> impl Strategy<Value = RationalMap> {
    (1u32..=3)
        .prop_flat_map(|d| prop::collection::vec(hompoly(3, d), 3))
        .prop_filter_map("not a map", |cs| RationalMap::new(cs).ok().filter(|f| f.degree() > 0))
}

pub fn point(n: usize, r: i64) -> impl Strategy<Value = ProjPoint> {
    prop::collection::vec(-r..=r, n).prop_filter_map("zero", |c| ProjPoint::from_i64(&c).ok())
}

pub fn matrix(n: usize, r: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-r..=r, n), n).prop_map(|rows| IntMatrix::from_i64_rows(&rows).unwrap())
}

pub fn map_of(vars: &[&str], coords: &[&str]) -> RationalMap {
    MapDocument::polynomial(None, vars, coords).to_map().unwrap()
}

pub fn xyz(coords: &[&str]) -> RationalMap {
    map_of(&["x", "y", "z"], coords)
}
