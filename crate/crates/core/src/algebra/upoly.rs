//! Univariate polynomials over the rationals and Sturm-sequence root
//! isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `p(t^2)`.
    pub fn compose_square(&self) -> UPoly {
        let mut out = vec![BigRational::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c.clone();
        }
        UPoly::new(out)
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let lead = &d.coeffs[dd];
        for k in (dd..r.len()).rev() {
            let f = &r[k] / lead;
            if f.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let v = &r[k - dd + i] - &f * dc;
                r[k - dd + i] = v;
            }
            q[k - dd] = f;
        }
        (UPoly::new(q), UPoly::new(r))
    }

    /// Integer multiple with coprime coefficients and positive leading
    /// coefficient.
    fn primitive(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        primitive_int(ints)
    }

    fn from_int_monic(c: &[BigInt]) -> UPoly {
        match c.last() {
            None => UPoly::new(vec![]),
            Some(l) => UPoly::new(c.iter().map(|v| BigRational::new(v.clone(), l.clone())).collect()),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        UPoly::from_int_monic(&int_gcd(self.primitive(), other.primitive()))
    }

    /// `p / gcd(p, p')`, monic: the same roots, each simple.
    pub fn squarefree(&self) -> UPoly {
        let p = self.primitive();
        let g = int_gcd(p.clone(), int_derivative(&p));
        UPoly::from_int_monic(&int_div_exact(&p, &g))
    }

    /// Sign of `p(x)`, computed in integers.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        int_sign_at(&self.primitive(), x)
    }

    /// Divide out `(t - r)` as often as it divides.
    pub fn deflate(&self, r: &BigRational) -> UPoly {
        let lin = UPoly::new(vec![-r.clone(), BigRational::one()]);
        let mut p = self.clone();
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
        }
        p
    }

    pub fn sturm(&self) -> SturmSequence {
        let first = self.primitive();
        let mut next = int_derivative(&first);
        let mut seq = vec![first];
        while !next.is_empty() {
            let r = int_prem_positive(seq.last().expect("nonempty"), &next);
            seq.push(next);
            next = content_free(r.into_iter().map(|c| -c).collect());
        }
        SturmSequence { seq }
    }
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    c
}

/// Divide by the positive content. The sign is kept.
fn content_free(c: Vec<BigInt>) -> Vec<BigInt> {
    let c = trim(c);
    let g = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return c;
    }
    c.into_iter().map(|v| v / &g).collect()
}

fn primitive_int(c: Vec<BigInt>) -> Vec<BigInt> {
    let c = content_free(c);
    if c.last().is_some_and(|l| l.is_negative()) {
        c.into_iter().map(|v| -v).collect()
    } else {
        c
    }
}

fn int_derivative(c: &[BigInt]) -> Vec<BigInt> {
    trim(c.iter().enumerate().skip(1).map(|(k, v)| v * BigInt::from(k)).collect())
}

/// Remainder of `|lc(b)|^(deg a - deg b + 1) a` by `b`, content removed.
/// Positive scaling keeps the signs a Sturm chain needs.
fn int_prem_positive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    if a.len() <= db {
        return content_free(a.to_vec());
    }
    let lead = b[db].clone();
    let lead_abs = lead.abs();
    let sign = if lead.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut r = a.to_vec();
    let mut k = r.len() - 1;
    loop {
        let top = r[k].clone();
        for v in r.iter_mut() {
            *v *= &lead_abs;
        }
        if !top.is_zero() {
            let f = &top * &sign;
            for (i, bc) in b.iter().enumerate() {
                r[k - db + i] -= &f * bc;
            }
        }
        r.pop();
        if k == db {
            break;
        }
        k -= 1;
    }
    content_free(r)
}

fn int_gcd(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> Vec<BigInt> {
    a = primitive_int(a);
    b = primitive_int(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = int_prem_positive(&a, &b);
        a = b;
        b = primitive_int(r);
    }
    primitive_int(a)
}

fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    if a.len() <= db {
        return vec![BigInt::one()];
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (db..a.len()).rev() {
        let f = &r[k] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            r[k - db + i] -= &f * bc;
        }
        q[k - db] = f;
    }
    debug_assert!(r.iter().all(|v| v.is_zero()));
    primitive_int(q)
}

/// Sign of `sum c_i x^i` at `x = u / v`, from `sum c_i u^i v^(d-i)`.
fn int_sign_at(c: &[BigInt], x: &BigRational) -> Ordering {
    let (u, v) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut vp = BigInt::one();
    for coef in c.iter().rev() {
        acc = acc * u + coef * &vp;
        vp *= v;
    }
    // the true value is acc / v^d with v^d > 0
    acc.sign().cmp_zero()
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

pub struct SturmSequence {
    seq: Vec<Vec<BigInt>>,
}

impl SturmSequence {
    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut prev: Option<Ordering> = None;
        for p in &self.seq {
            let s = int_sign_at(p, x);
            if s == Ordering::Equal {
                continue;
            }
            if prev.is_some_and(|q| q != s) {
                count += 1;
            }
            prev = Some(s);
        }
        count
    }

    /// Distinct roots in `(a, b)`; neither endpoint may be a root.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Largest real root of a polynomial, located inside an interval.
#[derive(Clone, Debug)]
pub struct MaxRoot {
    pub lower: BigRational,
    pub upper: BigRational,
    /// Set when the root was found to be rational.
    pub exact: Option<BigRational>,
    /// Root multiplicity is at least two.
    pub repeated: bool,
    pub iterations: usize,
}

/// Narrow `[lo, hi]` around the largest real root of `p`.
///
/// Requires every real root of `p` to be `<= hi` and the largest one to be
/// `>= lo`. Stops once the interval is narrower than `tol` and isolates the
/// root from the others, or after `max_iter` bisections.
pub fn max_real_root(
    p: &UPoly,
    lo: BigRational,
    hi: BigRational,
    tol: &BigRational,
    max_iter: usize,
) -> MaxRoot {
    let prim = p.primitive();
    let fold = int_gcd(prim.clone(), int_derivative(&prim));
    let repeated_at = |r: &BigRational| fold.len() > 1 && int_sign_at(&fold, r) == Ordering::Equal;
    let exact_at = |r: BigRational, iterations: usize| MaxRoot {
        lower: r.clone(),
        upper: r.clone(),
        repeated: repeated_at(&r),
        exact: Some(r),
        iterations,
    };
    // same roots, all simple
    let mut p = UPoly::from_int_monic(&int_div_exact(&prim, &fold));
    if p.sign_at(&hi) == Ordering::Equal {
        return exact_at(hi, 0);
    }
    let (mut lo, mut hi) = (lo, hi);
    if p.sign_at(&lo) == Ordering::Equal {
        let q = p.deflate(&lo);
        if q.degree().unwrap_or(0) == 0 || q.sturm().count(&lo, &hi) == 0 {
            return exact_at(lo, 0);
        }
        p = q;
    }
    let mut sturm = p.sturm();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut iterations = 0;
    loop {
        let distinct = sturm.count(&lo, &hi);
        if (&hi - &lo) <= *tol && distinct <= 1 {
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;
        let mid = (&lo + &hi) / &two;
        if p.sign_at(&mid) == Ordering::Equal {
            let q = p.deflate(&mid);
            let qs = q.sturm();
            if q.degree().unwrap_or(0) == 0 || qs.count(&mid, &hi) == 0 {
                return exact_at(mid, iterations);
            }
            p = q;
            sturm = qs;
            lo = mid;
            continue;
        }
        if sturm.count(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if let Some(r) = small_rational_root(&p, &lo, &hi) {
        return exact_at(r, iterations);
    }
    // a repeated root shares the isolating interval with a root of the fold
    let repeated = fold.len() > 1 && {
        let f = UPoly::from_int_monic(&fold).deflate(&lo);
        f.degree().unwrap_or(0) > 0 && f.sturm().count(&lo, &hi) > 0
    };
    MaxRoot {
        lower: lo,
        upper: hi,
        exact: None,
        repeated,
        iterations,
    }
}

/// A root of `p` in `[lo, hi]` with a small denominator, if there is one.
fn small_rational_root(p: &UPoly, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
    for den in 1..=64u32 {
        let d = BigRational::from_integer(BigInt::from(den));
        let num = (&mid * &d).round();
        let r = num / d;
        if &r >= lo && &r <= hi && p.sign_at(&r) == Ordering::Equal {
            return Some(r);
        }
    }
    None
}
