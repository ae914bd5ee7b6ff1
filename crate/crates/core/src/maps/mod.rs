//! Rational self-maps of `P^N` with exact normalization.
//!
//! A map is stored as `N + 1` homogeneous coordinates of a common degree
//! with no common polynomial factor and joint content one. Composition
//! cancels common factors at every step, which is what makes `deg(f^n)` the
//! true degree of the iterate.

mod degree;
mod document;
mod dominance;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::mpoly::default_var_names;
use crate::algebra::{multi_gcd, AlgebraError, Coeff, HomPoly};
use crate::point::{PointError, ProjPoint};

pub use degree::{
    degree_sequence, dyndeg_estimate, iterate_maps, BudgetStop, DegreeBudget, DegreeSequence,
    DynamicalDegreeEstimate, StopReason,
};
pub use document::{parse_map, MapDocument, MapKind, MAP_EXTENSION};
pub use dominance::{is_dominant, jacobian_determinant, Dominance};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error("coordinate {coordinate}: {source}")]
    Coordinate {
        coordinate: usize,
        #[source]
        source: AlgebraError,
    },
    #[error("coordinate {coordinate} is not homogeneous")]
    NotHomogeneous { coordinate: usize },
    #[error("coordinate {coordinate} has degree {found}, expected {expected}")]
    DegreeMismatch {
        coordinate: usize,
        expected: u32,
        found: u32,
    },
    #[error("all coordinates are zero")]
    AllCoordinatesZero,
    #[error("a map of P^N needs N + 1 = {expected} coordinates in {expected} variables, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("dimension mismatch: P^{left} vs P^{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("composition vanishes identically")]
    ZeroMap,
    #[error("point {0} is in the indeterminacy locus")]
    IndeterminatePoint(String),
    #[error("degree sequence needs at least {needed} terms, got {found}")]
    TooShort { needed: usize, found: usize },
    #[error("bad map document: {0}")]
    Document(String),
}

/// Dominant rational map `P^N --> P^N` over the coefficient ring `C`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMap<C = BigInt> {
    coords: Vec<HomPoly<C>>,
    degree: u32,
    vars: Vec<String>,
    name: Option<String>,
}

impl<C: Coeff> RationalMap<C> {
    /// Build and normalize a map from its coordinates.
    pub fn new(coords: Vec<HomPoly<C>>) -> Result<Self, MapError> {
        let n = coords.len();
        if n < 2 {
            return Err(MapError::WrongArity {
                expected: 2,
                found: n,
            });
        }
        if let Some(bad) = coords.iter().find(|c| c.num_vars() != n) {
            return Err(MapError::WrongArity {
                expected: n,
                found: bad.num_vars(),
            });
        }
        let degree = coords
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.degree())
            .ok_or(MapError::AllCoordinatesZero)?;
        let mut fixed = Vec::with_capacity(n);
        for (i, c) in coords.into_iter().enumerate() {
            if c.is_zero() {
                fixed.push(HomPoly::zero(n, degree));
            } else if c.degree() != degree {
                return Err(MapError::DegreeMismatch {
                    coordinate: i,
                    expected: degree,
                    found: c.degree(),
                });
            } else {
                fixed.push(c);
            }
        }
        let mut map = RationalMap {
            coords: fixed,
            degree,
            vars: default_var_names(n),
            name: None,
        };
        map.normalize()?;
        Ok(map)
    }

    pub fn with_vars(mut self, vars: Vec<String>) -> Self {
        debug_assert_eq!(vars.len(), self.coords.len());
        self.vars = vars;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Identity map of `P^N`.
    pub fn identity(dim: usize, one: C) -> Self {
        let n = dim + 1;
        let coords = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                HomPoly::monomial(e, one.clone())
            })
            .collect();
        RationalMap {
            coords,
            degree: 1,
            vars: default_var_names(n),
            name: Some("identity".into()),
        }
    }

    fn normalize(&mut self) -> Result<(), MapError> {
        let g = multi_gcd(&self.coords)?;
        if g.degree() > 0 {
            let n = self.coords.len();
            let new_degree = self.degree - g.degree();
            self.coords = self
                .coords
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        HomPoly::zero(n, new_degree)
                    } else {
                        c.div_exact(&g).expect("gcd divides every coordinate")
                    }
                })
                .collect();
            self.degree = new_degree;
        }
        let content = self
            .coords
            .iter()
            .filter_map(|c| c.poly().coeff_content())
            .reduce(|a, b| a.gcd(&b))
            .ok_or(MapError::AllCoordinatesZero)?;
        let lead = self
            .coords
            .iter()
            .find_map(|c| c.poly().leading_coeff().cloned())
            .expect("nonzero coordinate");
        let scale = content.mul(&lead.unit());
        if !scale.is_one() {
            self.coords = self
                .coords
                .iter()
                .map(|c| c.div_scalar(&scale).expect("content divides"))
                .collect();
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &[HomPoly<C>] {
        &self.coords
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Largest coefficient size over all coordinates, in bits.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coords.iter().map(|c| c.poly().max_coeff_bits()).max().unwrap_or(0)
    }

    /// `self ∘ inner`, normalized.
    pub fn compose(&self, inner: &RationalMap<C>) -> Result<RationalMap<C>, MapError> {
        if self.dim() != inner.dim() {
            return Err(MapError::DimensionMismatch {
                left: self.dim(),
                right: inner.dim(),
            });
        }
        let raw: Vec<HomPoly<C>> = self
            .coords
            .iter()
            .map(|c| c.compose(&inner.coords))
            .collect::<Result<_, _>>()?;
        if raw.iter().all(|c| c.is_zero()) {
            return Err(MapError::ZeroMap);
        }
        let mut out = RationalMap {
            degree: raw[0].degree(),
            coords: raw,
            vars: self.vars.clone(),
            name: None,
        };
        out.normalize()?;
        Ok(out)
    }

    /// Apply a ring map to all coefficients and renormalize. Fails if every
    /// coordinate vanishes.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Result<RationalMap<D>, MapError> {
        let coords: Vec<HomPoly<D>> = self.coords.iter().map(|c| c.map_coeffs(&f)).collect();
        if coords.iter().all(|c| c.is_zero()) {
            return Err(MapError::AllCoordinatesZero);
        }
        let n = coords.len();
        let coords = coords
            .into_iter()
            .map(|c| if c.is_zero() { HomPoly::zero(n, self.degree) } else { c })
            .collect();
        let mut out = RationalMap {
            coords,
            degree: self.degree,
            vars: self.vars.clone(),
            name: self.name.clone(),
        };
        out.normalize()?;
        Ok(out)
    }

    /// Coordinates as strings in the map's variable names.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string_with(&self.vars)).collect()
    }
}

impl RationalMap<BigInt> {
    /// Image of a rational point, or `IndeterminatePoint` when every
    /// coordinate vanishes there.
    pub fn eval(&self, p: &ProjPoint) -> Result<ProjPoint, MapError> {
        if p.coords().len() != self.coords.len() {
            return Err(MapError::DimensionMismatch {
                left: self.dim(),
                right: p.dim(),
            });
        }
        let values: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.eval(p.coords()).unwrap_or_default())
            .collect();
        ProjPoint::new(values).map_err(|_| MapError::IndeterminatePoint(p.to_string()))
    }
}

impl<C: Coeff> fmt::Display for RationalMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coord_strings().join(", "))
    }
}
