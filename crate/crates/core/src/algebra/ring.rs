//! Coefficient rings for the polynomial layer.
//!
//! Two rings are needed: the integers (characteristic zero) and prime
//! fields `F_p` (reduction modulo primes). Prime-field elements carry their
//! modulus, so constructors that need a zero or a one take an existing
//! element as a template.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mpoly::MPoly;

/// Large prime used when integer polynomials are imaged into a prime field.
pub const CERT_PRIME: u64 = (1u64 << 61) - 1;

/// Smallest prime-field modulus for which random evaluations are trusted to
/// find a coprimality witness quickly.
const MIN_CERT_FIELD: u64 = 1 << 10;

pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_u64_like(&self, v: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient, `None` when `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Greatest common divisor used for contents. Fields return one.
    fn gcd(&self, other: &Self) -> Self;
    /// The unit `u` with `self / u` in normal form: the sign over the
    /// integers, the element itself over a field.
    fn unit(&self) -> Self;
    /// Image in a prime field large enough for randomized coprimality
    /// certificates, if one exists.
    fn cert_image(&self) -> Option<Fp>;
    /// Number of bits needed to store the coefficient.
    fn bits(&self) -> u64;
    /// A faster gcd for this ring, when one applies; `None` defers to the
    /// subresultant algorithm.
    fn fast_gcd(_a: &MPoly<Self>, _b: &MPoly<Self>) -> Option<MPoly<Self>>
    where
        Self: Sized,
    {
        None
    }
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn from_u64_like(&self, v: u64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn cert_image(&self) -> Option<Fp> {
        Some(Fp::from_bigint(self, CERT_PRIME))
    }
    fn bits(&self) -> u64 {
        self.magnitude().bits()
    }
    fn fast_gcd(a: &MPoly<Self>, b: &MPoly<Self>) -> Option<MPoly<Self>> {
        super::heugcd::heu_gcd(a, b)
    }
}

/// Element of the prime field `F_p`, stored with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_bigint(v: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let r = v.mod_floor(&m);
        Fp {
            value: r.to_u64().expect("residue fits in u64"),
            modulus,
        }
    }

    pub fn from_i64(v: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let r = (v as i128).rem_euclid(m) as u64;
        Fp { value: r, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        self.pow(self.modulus - 2)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coeff for Fp {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn zero_like(&self) -> Self {
        Fp::new(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.modulus)
    }
    fn from_u64_like(&self, v: u64) -> Self {
        Fp::new(v, self.modulus)
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let s = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Fp {
            value: s as u64,
            modulus: self.modulus,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let s = (self.value as u128 + self.modulus as u128 - other.value as u128)
            % self.modulus as u128;
        Fp {
            value: s as u64,
            modulus: self.modulus,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let s = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Fp {
            value: s as u64,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.value == 0 {
            return None;
        }
        Some(self.mul(&other.inv()))
    }
    fn gcd(&self, other: &Self) -> Self {
        if self.value == 0 && other.value == 0 {
            self.zero_like()
        } else {
            self.one_like()
        }
    }
    fn unit(&self) -> Self {
        if self.value == 0 {
            self.one_like()
        } else {
            *self
        }
    }
    fn cert_image(&self) -> Option<Fp> {
        (self.modulus >= MIN_CERT_FIELD).then_some(*self)
    }
    fn bits(&self) -> u64 {
        64 - self.value.leading_zeros() as u64
    }
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Fp::new(a, n).pow(d).value;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse_round_trips() {
        for v in 1..13 {
            let a = Fp::new(v, 13);
            assert!(a.mul(&a.inv()).is_one());
        }
    }

    #[test]
    fn negative_integers_reduce_into_range() {
        assert_eq!(Fp::from_i64(-1, 7).value(), 6);
        assert_eq!(Fp::from_bigint(&BigInt::from(-15), 7).value(), 6);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime_u64(CERT_PRIME));
        assert!(!is_prime_u64(CERT_PRIME - 2));
    }

    #[test]
    fn integer_unit_is_sign() {
        assert_eq!(BigInt::from(-4).unit(), BigInt::from(-1));
        assert_eq!(BigInt::from(4).unit(), BigInt::from(1));
    }
}
