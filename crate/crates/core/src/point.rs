use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PointError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("cannot parse point '{0}'")]
    Parse(String),
}

/// Rational point of `P^N` in canonical integer coordinates: coprime, with
/// the first nonzero coordinate positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self, PointError> {
        let g = coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return Err(PointError::AllZero);
        }
        let neg = coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let g = if neg { -g } else { g };
        if !g.is_one() {
            for c in coords.iter_mut() {
                *c = &*c / &g;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, PointError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// `N` for a point of `P^N`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Bits of the largest coordinate.
    pub fn bits(&self) -> u64 {
        self.coords.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

impl FromStr for ProjPoint {
    type Err = PointError;

    /// Parses `"a,b,c"`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let coords: Result<Vec<BigInt>, _> = t.split(',').map(|c| c.trim().parse::<BigInt>()).collect();
        let coords = coords.map_err(|_| PointError::Parse(s.to_string()))?;
        if coords.len() < 2 {
            return Err(PointError::Parse(s.to_string()));
        }
        ProjPoint::new(coords)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_representative() {
        let p = ProjPoint::from_i64(&[4, 6, 10]).unwrap();
        assert_eq!(p, ProjPoint::from_i64(&[2, 3, 5]).unwrap());
        let q = ProjPoint::from_i64(&[0, -2, 4]).unwrap();
        assert_eq!(q.coords(), &[BigInt::from(0), BigInt::from(1), BigInt::from(-2)]);
        assert_eq!(ProjPoint::from_i64(&[0, 0]), Err(PointError::AllZero));
    }

    #[test]
    fn parses_lists() {
        let p: ProjPoint = "1, 0,1".parse().unwrap();
        assert_eq!(p.to_string(), "[1,0,1]");
        assert!("[1;2]".parse::<ProjPoint>().is_err());
        assert!("7".parse::<ProjPoint>().is_err());
    }
}
