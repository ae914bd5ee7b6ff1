use std::fmt;

use num_bigint::BigInt;

use super::mpoly::{default_var_names, Exponents, MPoly};
use super::ring::Coeff;
use super::AlgebraError;

/// Homogeneous polynomial with a declared degree. The zero polynomial keeps
/// its degree so that it can sit in a coordinate tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPoly<C = BigInt> {
    poly: MPoly<C>,
    degree: u32,
}

impl<C: Coeff> HomPoly<C> {
    pub fn new(poly: MPoly<C>, degree: u32) -> Result<Self, AlgebraError> {
        if poly.terms().any(|(e, _)| e.iter().sum::<u32>() != degree) {
            return Err(AlgebraError::NotHomogeneous);
        }
        Ok(HomPoly { poly, degree })
    }

    /// Wrap a nonzero homogeneous polynomial, taking its degree from the terms.
    pub fn from_poly(poly: MPoly<C>) -> Result<Self, AlgebraError> {
        let degree = poly.total_degree().ok_or(AlgebraError::ZeroPolynomial)?;
        Self::new(poly, degree)
    }

    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomPoly {
            poly: MPoly::zero(num_vars),
            degree,
        }
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let degree = exps.iter().sum();
        let n = exps.len();
        HomPoly {
            poly: MPoly::monomial(n, exps, c),
            degree,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MPoly<C> {
        &self.poly
    }

    pub fn into_poly(self) -> MPoly<C> {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn check_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.num_vars() != other.num_vars() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.num_vars(),
                found: other.num_vars(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(HomPoly {
            poly: self.poly.add(&other.poly),
            degree: self.degree,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        Ok(HomPoly {
            poly: self.poly.mul(&other.poly),
            degree: self.degree + other.degree,
        })
    }

    /// Substitute `subst[i]` for the `i`-th variable.
    pub fn compose(&self, subst: &[HomPoly<C>]) -> Result<Self, AlgebraError> {
        if subst.len() != self.num_vars() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.num_vars(),
                found: subst.len(),
            });
        }
        let Some(first) = subst.first() else {
            return Ok(self.clone());
        };
        let (inner_vars, d) = (first.num_vars(), first.degree);
        for s in subst {
            if s.num_vars() != inner_vars {
                return Err(AlgebraError::ArityMismatch {
                    expected: inner_vars,
                    found: s.num_vars(),
                });
            }
            if s.degree != d {
                return Err(AlgebraError::DegreeMismatch {
                    expected: d,
                    found: s.degree,
                });
            }
        }
        let out_degree = self.degree * d;
        let Some(one) = self.poly.any_coeff().map(|c| c.one_like()) else {
            return Ok(HomPoly::zero(inner_vars, out_degree));
        };
        // powers[i][k] = subst[i]^k, filled lazily
        let mut powers: Vec<Vec<MPoly<C>>> = vec![vec![MPoly::constant(inner_vars, one.clone())]; subst.len()];
        let mut acc = MPoly::zero(inner_vars);
        for (e, c) in self.poly.terms() {
            let mut term = MPoly::constant(inner_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&subst[i].poly);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(HomPoly {
            poly: acc,
            degree: out_degree,
        })
    }

    /// gcd of the coefficients, normalized to be positive over the integers.
    pub fn content(&self) -> Result<C, AlgebraError> {
        let g = self.poly.coeff_content().ok_or(AlgebraError::ZeroPolynomial)?;
        let u = g.unit();
        Ok(g.div_exact(&u).expect("unit divides"))
    }

    pub fn eval(&self, point: &[C]) -> Option<C> {
        self.poly.eval(point)
    }

    pub fn scale(&self, c: &C) -> Self {
        HomPoly {
            poly: self.poly.scale(c),
            degree: self.degree,
        }
    }

    pub fn div_scalar(&self, c: &C) -> Option<Self> {
        Some(HomPoly {
            poly: self.poly.div_scalar(c)?,
            degree: self.degree,
        })
    }

    /// Exact division by a homogeneous divisor.
    pub fn div_exact(&self, divisor: &HomPoly<C>) -> Option<Self> {
        if divisor.degree > self.degree {
            return self.is_zero().then(|| HomPoly::zero(self.num_vars(), 0));
        }
        Some(HomPoly {
            poly: self.poly.div_exact(&divisor.poly)?,
            degree: self.degree - divisor.degree,
        })
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> HomPoly<D> {
        HomPoly {
            poly: self.poly.map_coeffs(f),
            degree: self.degree,
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        HomPoly {
            poly: self.poly.derivative(var),
            degree: self.degree.saturating_sub(1),
        }
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        self.poly.fmt_with(f, names)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        struct Show<'a, C: Coeff>(&'a HomPoly<C>, &'a [String]);
        impl<C: Coeff> fmt::Display for Show<'_, C> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        Show(self, names).to_string()
    }
}

impl<C: Coeff> fmt::Display for HomPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_names(self.num_vars()))
    }
}
