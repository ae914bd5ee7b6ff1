mod common;

use common::{hompoly, map2, point, xyz};
use deglab_core::maps::{
    degree_sequence, dyndeg_estimate, is_dominant, DegreeBudget, DegreeSequence, Dominance, MapError, RationalMap,
};
use proptest::prelude::*;

fn budget() -> DegreeBudget {
    DegreeBudget {
        degree_cap: 12,
        coeff_bits: 4096,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn normalization_is_idempotent(f in map2()) {
        let again = RationalMap::new(f.coords().to_vec()).unwrap();
        prop_assert_eq!(&again, &f);
    }

    #[test]
    fn common_factors_are_removed(f in map2(), g in hompoly(3, 1).prop_filter("nonzero", |g| !g.is_zero())) {
        let scaled: Vec<_> = f.coords().iter().map(|c| c.mul(&g).unwrap()).collect();
        let h = RationalMap::new(scaled).unwrap();
        prop_assert_eq!(h.coords(), f.coords());
    }

    #[test]
    fn degrees_are_submultiplicative(f in map2()) {
        let seq = match degree_sequence(&f, 5, budget()) {
            Ok(s) => s,
            Err(MapError::ZeroMap) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        // iterates of a dominant map never collapse to constants
        if is_dominant(&f, 4, 7) == Dominance::Dominant {
            prop_assert!(seq.degrees.iter().all(|&d| d >= 1));
        }
        prop_assert!(seq.is_submultiplicative());
        for (i, &d) in seq.degrees.iter().enumerate() {
            prop_assert!(d <= f.degree().pow(i as u32 + 1));
        }
    }

    #[test]
    fn action_is_associative(f in map2(), g in map2(), p in point(3, 5)) {
        let fg = match f.compose(&g) {
            Ok(h) => h,
            Err(_) => return Ok(()),
        };
        let Ok(gp) = g.eval(&p) else { return Ok(()) };
        let Ok(lhs) = f.eval(&gp) else { return Ok(()) };
        // outside the indeterminacy of the composite both sides agree
        if let Ok(rhs) = fg.eval(&p) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn certified_upper_never_exceeds_a_root_estimate(degrees in prop::collection::vec(1u32..200, 2..12)) {
        let mut ds = degrees;
        ds.sort_unstable();
        let e = dyndeg_estimate(&DegreeSequence::new(ds)).unwrap();
        prop_assert_eq!(e.root_estimates.len(), e.n_used);
        prop_assert!(e.root_estimates.iter().all(|&r| e.certified_upper_f64 <= r + 1e-9));
        prop_assert!(e.extrapolated <= e.certified_upper_f64 + 1e-9);
        prop_assert!(e.extrapolated >= 1.0);
    }
}

#[test]
fn linear_growth_map() {
    let f = xyz(&["x*y + x*z", "y*z + z^2", "z^2"]);
    let seq = degree_sequence(&f, 12, DegreeBudget::default()).unwrap();
    assert_eq!(seq.degrees, (2..=13).collect::<Vec<u32>>());
    let e = dyndeg_estimate(&seq).unwrap();
    assert_eq!(e.polynomial_growth, Some(1));
    assert_eq!(e.extrapolated, 1.0);
    assert!(!seq.consistent_with_morphism());
}

#[test]
fn power_maps_follow_the_morphism_law() {
    for (d, coords) in [(2u32, ["x^2", "y^2", "z^2"]), (3, ["x^3", "y^3", "z^3"])] {
        let budget = DegreeBudget {
            degree_cap: 256,
            ..DegreeBudget::default()
        };
        let seq = degree_sequence(&xyz(&coords), 5, budget).unwrap();
        assert_eq!(seq.degrees, (1..=5).map(|n| d.pow(n)).collect::<Vec<_>>());
        assert!(seq.consistent_with_morphism());
    }
}

#[test]
fn dominance_witnesses() {
    assert_eq!(is_dominant(&xyz(&["x^2", "x*y", "y^2"]), 8, 1), Dominance::NotDominant);
    assert_eq!(is_dominant(&xyz(&["x*y + x*z", "y*z + z^2", "z^2"]), 8, 1), Dominance::Dominant);
}
