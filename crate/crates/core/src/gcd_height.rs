//! Heights relative to subvarieties of codimension at least two, realized
//! as `log gcd` of the generator values at the canonical coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::enclosure::ln_bigint;
use crate::algebra::parse::parse_hompoly;
use crate::algebra::{AlgebraError, HomPoly};
use crate::heights::weil_height;
use crate::maps::{MapError, RationalMap};
use crate::point::ProjPoint;
use crate::series::linear_fit;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GcdHeightError {
    #[error("a subvariety needs at least two generators, got {0}")]
    TooFewGenerators(usize),
    #[error("every generator is zero")]
    ZeroGenerators,
    #[error("generators live in {found} variables, the point in {expected}")]
    Arity { expected: usize, found: usize },
    #[error("point lies on the subvariety (step {n})")]
    PointOnSubvariety { n: usize },
    #[error("orbit hit the indeterminacy locus at step {n}")]
    IndeterminatePoint { n: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Generators of the ideal of `Z`, each stored primitive with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubvarietySpec {
    generators: Vec<HomPoly>,
}

impl SubvarietySpec {
    pub fn new(generators: Vec<HomPoly>) -> Result<Self, GcdHeightError> {
        if generators.len() < 2 {
            return Err(GcdHeightError::TooFewGenerators(generators.len()));
        }
        let nv = generators[0].num_vars();
        if let Some(g) = generators.iter().find(|g| g.num_vars() != nv) {
            return Err(GcdHeightError::Arity {
                expected: nv,
                found: g.num_vars(),
            });
        }
        let generators: Vec<HomPoly> = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let c = g.content().expect("nonzero");
                let lead_neg = g.poly().leading_coeff().is_some_and(|v| v.is_negative());
                let c = if lead_neg { -c } else { c };
                g.div_scalar(&c).expect("content divides")
            })
            .collect();
        if generators.is_empty() {
            return Err(GcdHeightError::ZeroGenerators);
        }
        Ok(SubvarietySpec { generators })
    }

    pub fn parse(generators: &[&str], vars: &[&str]) -> Result<Self, GcdHeightError> {
        let gens = generators
            .iter()
            .map(|g| parse_hompoly(g, vars))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gens)
    }

    pub fn generators(&self) -> &[HomPoly] {
        &self.generators
    }

    pub fn num_vars(&self) -> usize {
        self.generators[0].num_vars()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelativeHeight {
    pub value: f64,
    #[serde(serialize_with = "ser_big")]
    pub gcd: BigInt,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `log gcd` of the nonzero generator values at `P`. A zero value has
/// infinite valuation at every prime, so skipping it is exact.
pub fn gcd_height(p: &ProjPoint, z: &SubvarietySpec) -> Result<RelativeHeight, GcdHeightError> {
    if p.coords().len() != z.num_vars() {
        return Err(GcdHeightError::Arity {
            expected: p.coords().len(),
            found: z.num_vars(),
        });
    }
    let g = z
        .generators
        .iter()
        .map(|gen| gen.eval(p.coords()).unwrap_or_default())
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
    if g.is_zero() {
        return Err(GcdHeightError::PointOnSubvariety { n: 0 });
    }
    Ok(RelativeHeight {
        value: ln_bigint(&g),
        gcd: g,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GcdRatioRecord {
    pub n: usize,
    pub h_z: f64,
    pub h_h: f64,
    /// `h_Z / h_H`, zero when `h_H = 0`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GcdRatioSummary {
    pub max: f64,
    pub prefix_mean: f64,
    pub tail_mean: f64,
    pub trend_slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GcdRatioSeries {
    pub records: Vec<GcdRatioRecord>,
    pub summary: GcdRatioSummary,
}

const PREFIX_LEN: usize = 20;

/// Mean of the first 20 values, mean of the last half, maximum and least
/// squares slope against the index.
pub fn summarize(values: &[f64]) -> GcdRatioSummary {
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let xs: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
    GcdRatioSummary {
        max: values.iter().cloned().fold(0.0, f64::max),
        prefix_mean: mean(&values[..values.len().min(PREFIX_LEN)]),
        tail_mean: mean(&values[values.len() / 2..]),
        trend_slope: linear_fit(&xs, values).map(|f| f.slope).unwrap_or(0.0),
    }
}

/// `(h_Z(f^n P), h(f^n P))` for `n = 0..=n_max`.
pub fn gcd_ratio_series(
    f: &RationalMap,
    p: &ProjPoint,
    z: &SubvarietySpec,
    n_max: usize,
) -> Result<GcdRatioSeries, GcdHeightError> {
    let mut records = Vec::with_capacity(n_max + 1);
    let mut cur = p.clone();
    for n in 0..=n_max {
        if n > 0 {
            cur = match f.eval(&cur) {
                Ok(q) => q,
                Err(MapError::IndeterminatePoint(_)) => return Err(GcdHeightError::IndeterminatePoint { n }),
                Err(e) => return Err(e.into()),
            };
        }
        let h_z = match gcd_height(&cur, z) {
            Ok(h) => h.value,
            Err(GcdHeightError::PointOnSubvariety { .. }) => return Err(GcdHeightError::PointOnSubvariety { n }),
            Err(e) => return Err(e),
        };
        let h_h = weil_height(&cur);
        records.push(GcdRatioRecord {
            n,
            h_z,
            h_h,
            ratio: if h_h > 0.0 { h_z / h_h } else { 0.0 },
        });
    }
    let ratios: Vec<f64> = records.iter().map(|r| r.ratio).collect();
    Ok(GcdRatioSeries {
        summary: summarize(&ratios),
        records,
    })
}
