//! Reduction of maps modulo primes and mod-`p` degree sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::enclosure::nth_root_upper;
use crate::algebra::ring::is_prime_u64;
use crate::algebra::Fp;
use crate::exec::Exec;
use crate::maps::{
    degree_sequence, dyndeg_estimate, is_dominant, DegreeBudget, DegreeSequence, Dominance, MapError, RationalMap,
};

const DOMINANCE_TRIALS: usize = 8;
const DOMINANCE_SEED: u64 = 0x0d0_11a7e;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModPError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad reduction mod {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("deg mod {p} of iterate {n} is {mod_p}, above the characteristic zero degree {char0}")]
    ExceedsCharZero { p: u64, n: usize, mod_p: u32, char0: u32 },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Debug)]
pub struct ReducedMap {
    pub p: u64,
    pub map: RationalMap<Fp>,
    /// `Dominant` is certain. `NotDominant` only says the Jacobian vanishes
    /// mod `p`, which also happens for inseparable maps such as Frobenius.
    pub dominance: Dominance,
}

impl ReducedMap {
    pub fn dominance_verified(&self) -> bool {
        self.dominance == Dominance::Dominant
    }
}

/// Reduce coefficients mod `p` and renormalize over `F_p`.
pub fn reduce_map(f: &RationalMap, p: u64) -> Result<ReducedMap, ModPError> {
    if !is_prime_u64(p) {
        return Err(ModPError::NotPrime(p));
    }
    for (i, c) in f.coords().iter().enumerate() {
        if !c.is_zero() && c.map_coeffs(|v| Fp::from_bigint(v, p)).is_zero() {
            return Err(ModPError::BadReduction {
                p,
                reason: format!("coordinate {i} vanishes"),
            });
        }
    }
    let map = f.map_coeffs(|v| Fp::from_bigint(v, p)).map_err(|e| ModPError::BadReduction {
        p,
        reason: e.to_string(),
    })?;
    let dominance = is_dominant(&map, DOMINANCE_TRIALS, DOMINANCE_SEED);
    Ok(ReducedMap { p, map, dominance })
}

fn certified_upper(degrees: &[u32]) -> Option<BigRational> {
    degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| nth_root_upper(&BigRational::from_integer(BigInt::from(d)), (i + 1) as u32))
        .min()
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModPDegreeReport {
    pub p: u64,
    pub degrees: Vec<u32>,
    pub char0_degrees: Vec<u32>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub delta_p_upper: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub char0_delta_upper: Option<BigRational>,
    pub dominance_verified: bool,
    pub budget_hit: bool,
}

impl ModPDegreeReport {
    pub fn agrees_with_char0(&self) -> bool {
        self.degrees.iter().zip(&self.char0_degrees).all(|(a, b)| a == b)
    }

    pub fn delta_p_upper_f64(&self) -> Option<f64> {
        self.delta_p_upper.as_ref().and_then(|r| r.to_f64())
    }

    pub fn char0_delta_upper_f64(&self) -> Option<f64> {
        self.char0_delta_upper.as_ref().and_then(|r| r.to_f64())
    }
}

/// Degrees of the iterates of the reduction, paired with a characteristic
/// zero sequence. Fails if any mod-`p` degree exceeds its partner.
pub fn degree_sequence_mod_p_against(
    f: &RationalMap,
    p: u64,
    char0: &DegreeSequence,
    budget: DegreeBudget,
) -> Result<ModPDegreeReport, ModPError> {
    let reduced = reduce_map(f, p)?;
    let n_max = char0.degrees.len();
    let seq = match degree_sequence(&reduced.map, n_max, budget) {
        Ok(s) => s,
        Err(MapError::ZeroMap) => {
            return Err(ModPError::BadReduction {
                p,
                reason: "an iterate vanishes identically".into(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    for (i, (&a, &b)) in seq.degrees.iter().zip(&char0.degrees).enumerate() {
        if a > b {
            return Err(ModPError::ExceedsCharZero {
                p,
                n: i + 1,
                mod_p: a,
                char0: b,
            });
        }
    }
    Ok(ModPDegreeReport {
        p,
        delta_p_upper: certified_upper(&seq.degrees),
        char0_delta_upper: certified_upper(&char0.degrees),
        char0_degrees: char0.degrees.clone(),
        budget_hit: seq.stopped.is_some() || char0.stopped.is_some(),
        degrees: seq.degrees,
        dominance_verified: reduced.dominance_verified(),
    })
}

pub fn degree_sequence_mod_p(
    f: &RationalMap,
    p: u64,
    n_max: usize,
    budget: DegreeBudget,
) -> Result<ModPDegreeReport, ModPError> {
    let char0 = degree_sequence(f, n_max, budget)?;
    degree_sequence_mod_p_against(f, p, &char0, budget)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeOutcome {
    Report(ModPDegreeReport),
    BadReduction { p: u64, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ModPComparison {
    pub char0: DegreeSequence,
    pub char0_extrapolated: Option<f64>,
    pub rows: Vec<PrimeOutcome>,
}

/// `deg` of the iterates over each prime next to characteristic zero. Bad
/// reductions are rows in the table; a mod-`p` degree above characteristic
/// zero is an error.
pub fn compare_dyndeg(
    f: &RationalMap,
    primes: &[u64],
    n_max: usize,
    budget: DegreeBudget,
    exec: Exec,
) -> Result<ModPComparison, ModPError> {
    let char0 = degree_sequence(f, n_max, budget)?;
    let results = exec.map(primes, |&p| degree_sequence_mod_p_against(f, p, &char0, budget));
    let mut rows = Vec::with_capacity(primes.len());
    for r in results {
        match r {
            Ok(rep) => rows.push(PrimeOutcome::Report(rep)),
            Err(ModPError::BadReduction { p, reason }) => rows.push(PrimeOutcome::BadReduction { p, reason }),
            Err(e) => return Err(e),
        }
    }
    let char0_extrapolated = dyndeg_estimate(&char0).ok().map(|e| e.extrapolated);
    Ok(ModPComparison {
        char0,
        char0_extrapolated,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapDocument;

    fn map3(coords: &[&str]) -> RationalMap {
        MapDocument::polynomial(None, &["x", "y", "z"], coords).to_map().unwrap()
    }

    const LINEAR: [&str; 3] = ["x*y + x*z", "y*z + z^2", "z^2"];

    #[test]
    fn unit_coefficients_survive() {
        let r = reduce_map(&map3(&LINEAR), 5).unwrap();
        assert_eq!(r.map.degree(), 2);
        assert_eq!(r.map.to_string(), "[x*y + x*z, y*z + z^2, z^2]");
        assert!(r.dominance_verified());
    }

    #[test]
    fn vanishing_coordinate_is_bad_reduction() {
        let f = map3(&["7*x^2", "y^2", "z^2"]);
        assert!(matches!(reduce_map(&f, 7), Err(ModPError::BadReduction { p: 7, .. })));
        assert_eq!(reduce_map(&f, 8).unwrap_err(), ModPError::NotPrime(8));
    }

    #[test]
    fn reduction_drops_a_term() {
        let r = reduce_map(&map3(&["x^2 + 5*x*y", "y^2", "z^2"]), 5).unwrap();
        assert_eq!(r.map.to_string(), "[x^2, y^2, z^2]");
    }

    #[test]
    fn frobenius_like_reduction_is_kept() {
        let r = reduce_map(&map3(&["x^2", "y^2", "z^2"]), 2).unwrap();
        assert!(!r.dominance_verified());
        let rep = degree_sequence_mod_p(&map3(&["x^2", "y^2", "z^2"]), 2, 4, DegreeBudget::default()).unwrap();
        assert_eq!(rep.degrees, vec![2, 4, 8, 16]);
    }

    #[test]
    fn linear_growth_map_agrees_with_char0() {
        let rep = degree_sequence_mod_p(&map3(&LINEAR), 101, 6, DegreeBudget::default()).unwrap();
        assert_eq!(rep.degrees, vec![2, 3, 4, 5, 6, 7]);
        assert!(rep.agrees_with_char0());
        let cmp = compare_dyndeg(&map3(&LINEAR), &[2, 3, 5, 101], 6, DegreeBudget::default(), Exec::Parallel).unwrap();
        for row in cmp.rows {
            match row {
                PrimeOutcome::Report(r) => assert!(r.agrees_with_char0()),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn designed_cancellation_mod_three() {
        let f = map3(&["x^2 + 3*y^2", "x*y", "x*z"]);
        let rep = degree_sequence_mod_p(&f, 3, 5, DegreeBudget::default()).unwrap();
        assert_eq!(rep.degrees, vec![1, 1, 1, 1, 1]);
        assert!(rep.delta_p_upper.as_ref().unwrap() < rep.char0_delta_upper.as_ref().unwrap());
        let rep7 = degree_sequence_mod_p(&f, 7, 5, DegreeBudget::default()).unwrap();
        assert!(rep7.agrees_with_char0());
    }

    #[test]
    fn vanishing_iterate_is_bad_reduction() {
        // invertible over Q, nilpotent mod 2
        let f = map3(&["2*x + y", "-z", "2*x"]);
        assert_eq!(degree_sequence(&f, 4, DegreeBudget::default()).unwrap().degrees, vec![1; 4]);
        assert!(matches!(
            degree_sequence_mod_p(&f, 2, 4, DegreeBudget::default()),
            Err(ModPError::BadReduction { p: 2, .. })
        ));
        assert!(degree_sequence_mod_p(&f, 3, 4, DegreeBudget::default()).unwrap().agrees_with_char0());
    }

    #[test]
    fn reduction_commutes_with_composition() {
        let f = map3(&["x^2 + 3*y^2", "x*y + z^2", "x*z"]);
        let ff = f.compose(&f).unwrap();
        for p in [2u64, 3, 5, 7] {
            let lhs = reduce_map(&ff, p).unwrap().map;
            let r = reduce_map(&f, p).unwrap().map;
            let rhs = r.compose(&r).unwrap();
            assert_eq!(lhs, rhs, "p = {p}");
        }
    }
}
