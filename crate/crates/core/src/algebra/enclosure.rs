use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Closed rational interval known to contain a real number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealEnclosure {
    lower: BigRational,
    upper: BigRational,
}

impl RealEnclosure {
    pub fn new(lower: BigRational, upper: BigRational) -> Self {
        assert!(lower <= upper, "enclosure bounds out of order");
        RealEnclosure { lower, upper }
    }

    pub fn exact(v: BigRational) -> Self {
        RealEnclosure {
            lower: v.clone(),
            upper: v,
        }
    }

    pub fn from_integer(v: BigInt) -> Self {
        Self::exact(BigRational::from_integer(v))
    }

    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64().unwrap_or(f64::NAN)
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.to_f64().unwrap_or(f64::NAN)
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lower <= v && v <= &self.upper
    }

    /// Membership of a float allowing `slack` on both sides.
    pub fn contains_f64(&self, v: f64, slack: f64) -> bool {
        self.lower_f64() - slack <= v && v <= self.upper_f64() + slack
    }

    pub fn intersect(&self, other: &RealEnclosure) -> Option<RealEnclosure> {
        let lo = (&self.lower).max(&other.lower).clone();
        let hi = (&self.upper).min(&other.upper).clone();
        (lo <= hi).then(|| RealEnclosure::new(lo, hi))
    }

    /// Product of two enclosures of nonnegative numbers.
    pub fn mul_nonneg(&self, other: &RealEnclosure) -> RealEnclosure {
        debug_assert!(!self.lower.is_negative() && !other.lower.is_negative());
        RealEnclosure::new(&self.lower * &other.lower, &self.upper * &other.upper)
    }

    pub fn pow_nonneg(&self, m: u32) -> RealEnclosure {
        RealEnclosure::new(pow_rat(&self.lower, m), pow_rat(&self.upper, m))
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "[{:.12}, {:.12}]", self.lower_f64(), self.upper_f64())
        }
    }
}

impl Serialize for RealEnclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RealEnclosure", 4)?;
        st.serialize_field("lower", &self.lower_f64())?;
        st.serialize_field("upper", &self.upper_f64())?;
        st.serialize_field("lower_exact", &self.lower.to_string())?;
        st.serialize_field("upper_exact", &self.upper.to_string())?;
        st.end()
    }
}

pub fn pow_rat(x: &BigRational, m: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").abs().ln();
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rat(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn rat_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite float")
}

/// Rational `u >= x^(1/m)` for `x >= 0`, within a few ulps.
pub fn nth_root_upper(x: &BigRational, m: u32) -> BigRational {
    if x.is_zero() || m == 1 {
        return x.clone();
    }
    if x.is_one() {
        return BigRational::one();
    }
    let est = (ln_rat(x) / m as f64).exp();
    let mut factor = 1.0 + 4.0 * f64::EPSILON;
    loop {
        let u = rat_from_f64(est * factor);
        if pow_rat(&u, m) >= *x {
            return u;
        }
        factor = 1.0 + (factor - 1.0) * 4.0;
    }
}

/// Rational `0 <= l <= x^(1/m)` for `x >= 0`, within a few ulps.
pub fn nth_root_lower(x: &BigRational, m: u32) -> BigRational {
    if x.is_zero() || m == 1 {
        return x.clone();
    }
    if x.is_one() {
        return BigRational::one();
    }
    let est = (ln_rat(x) / m as f64).exp();
    let mut factor = 1.0 - 4.0 * f64::EPSILON;
    loop {
        let l = rat_from_f64((est * factor).max(0.0));
        if pow_rat(&l, m) <= *x {
            return l;
        }
        factor = 1.0 - (1.0 - factor) * 4.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn root_bounds_bracket() {
        for (x, m) in [(2i64, 2u32), (10, 3), (1_000_003, 7), (5, 64)] {
            let lo = nth_root_lower(&int(x), m);
            let hi = nth_root_upper(&int(x), m);
            assert!(pow_rat(&lo, m) <= int(x));
            assert!(pow_rat(&hi, m) >= int(x));
            let w = (&hi - &lo).to_f64().unwrap();
            assert!(w < 1e-12, "{x}^(1/{m}) width {w}");
        }
    }

    #[test]
    fn perfect_powers_and_trivial_cases() {
        assert_eq!(nth_root_upper(&int(1), 5), int(1));
        assert_eq!(nth_root_lower(&int(0), 5), int(0));
        let hi = nth_root_upper(&int(8), 3);
        assert!(hi >= int(2));
    }

    #[test]
    fn huge_integer_logs() {
        let big = BigInt::from(3).pow(5000);
        let l = ln_bigint(&big);
        assert!((l - 5000.0 * 3f64.ln()).abs() < 1e-9 * l);
    }
}
