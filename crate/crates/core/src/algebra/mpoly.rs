//! Sparse multivariate polynomials over a [`Coeff`] ring.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration is
//! in lexicographic order with the first variable most significant and the
//! leading term is the last entry.

use std::collections::BTreeMap;
use std::fmt;

use super::ring::{Coeff, Fp};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: C) -> Self {
        debug_assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { nvars, terms }
    }

    /// The polynomial `x_var` with coefficient `one`.
    pub fn var(nvars: usize, var: usize, one: C) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, e, one)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0)))
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&C> {
        self.terms.get(e)
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.leading().map(|(_, c)| c)
    }

    /// Any coefficient, used as a template for ring constants.
    pub fn any_coeff(&self) -> Option<&C> {
        self.terms.values().next()
    }

    pub fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_total_degree()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.mul(s));
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut r = Self::zero(self.nvars);
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca.mul(cb));
            }
        }
        r
    }

    pub fn mul_monomial(&self, shift: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Divide by a monomial that divides every term.
    pub fn div_monomial(&self, shift: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32, one: &C) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, one.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide every coefficient exactly by `c`.
    pub fn div_scalar(&self, c: &C) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, a) in &self.terms {
            terms.insert(e.clone(), a.div_exact(c)?);
        }
        Some(MPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact division, `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (de, dc) = divisor.leading()?;
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if divisor.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                if e.iter().zip(de).any(|(a, b)| a < b) {
                    return None;
                }
                terms.insert(e.iter().zip(de).map(|(a, b)| a - b).collect(), c.div_exact(dc)?);
            }
            return Some(MPoly {
                nvars: self.nvars,
                terms,
            });
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = rc.div_exact(dc)?;
            for (e, c) in &divisor.terms {
                let te: Exponents = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, c.mul(&qc).neg());
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`, index = power of `var`. The
    /// returned coefficients keep all variables, with exponent 0 in `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut p = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2[var] += k as u32;
                p.add_term(e2, a.clone());
            }
        }
        p
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                r.add_term(e2, c.mul(&c.from_u64_like(e[var] as u64)));
            }
        }
        r
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Option<Exponents> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    /// gcd of all coefficients in the coefficient ring.
    pub fn coeff_content(&self) -> Option<C> {
        let first = self.terms.values().next()?;
        Some(self.terms.values().fold(first.zero_like(), |acc, c| acc.gcd(c)))
    }

    /// Evaluate every variable.
    pub fn eval(&self, point: &[C]) -> Option<C> {
        debug_assert_eq!(point.len(), self.nvars);
        let template = point.first()?.clone();
        let mut acc = template.zero_like();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Substitute `value` for `var` (the variable stays, with exponent 0).
    pub fn substitute(&self, var: usize, value: &C) -> Self {
        let mut r = Self::zero(self.nvars);
        let mut powers: Vec<C> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = match powers.last() {
                    None => value.one_like(),
                    Some(p) => p.mul(value),
                };
                powers.push(next);
            }
            let mut e2 = e.clone();
            e2[var] = 0;
            r.add_term(e2, c.mul(&powers[k]));
        }
        r
    }

    /// Apply a ring map to the coefficients, dropping terms that vanish.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    pub fn cert_image(&self) -> Option<MPoly<Fp>> {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.cert_image()?);
        }
        Some(r)
    }

    /// Largest coefficient size in bits.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            let mut first = true;
            if mag != "1" || is_const {
                write!(f, "{mag}")?;
                first = false;
            }
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = names.get(v).map(String::as_str).unwrap_or("?");
                if k == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Default variable names: `x, y, z, w` then `x0, x1, ...`.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    const BASE: [&str; 4] = ["x", "y", "z", "w"];
    if nvars <= 4 {
        BASE[..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_names(self.nvars))
    }
}
