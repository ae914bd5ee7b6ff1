mod common;

use common::{hompoly, map_of, point, xyz};
use deglab_core::heights::{
    arith_degree_estimate, canonical_height, height_bounds, is_preperiodic, orbit, weil_height, BoundKind,
    Convergence, Preperiodicity, Termination,
};
use deglab_core::maps::RationalMap;
use deglab_core::ProjPoint;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Morphisms of `P^1` of degree 2 or 3 with small coefficients.
fn p1_morphism() -> impl Strategy<Value = RationalMap> {
    (2u32..=3)
        .prop_flat_map(|d| (hompoly(2, d), hompoly(2, d)))
        .prop_filter_map("degenerate", |(f, g)| {
            let m = RationalMap::new(vec![f, g]).ok()?;
            (m.degree() >= 2 && height_bounds(&m).is_ok()).then_some(m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weil_height_ignores_scaling(p in point(3, 50), c in prop_oneof![-9i64..=-1, 1i64..=9]) {
        let scaled = ProjPoint::new(p.coords().iter().map(|x| x * BigInt::from(c)).collect()).unwrap();
        prop_assert_eq!(weil_height(&scaled), weil_height(&p));
        prop_assert!(weil_height(&p) >= 0.0);
    }

    #[test]
    fn height_transform_is_bounded_on_p1(f in p1_morphism(), pts in prop::collection::vec(point(2, 1000), 100)) {
        let b = height_bounds(&f).unwrap();
        let c = b.constant().unwrap();
        let d = f.degree() as f64;
        for p in &pts {
            let q = f.eval(p).unwrap();
            let diff = weil_height(&q) - d * weil_height(p);
            prop_assert!(diff <= b.upper + 1e-9, "{diff} > {}", b.upper);
            prop_assert!(diff.abs() <= c + 1e-9, "|{diff}| > {c}");
        }
    }

    #[test]
    fn canonical_height_functional_equation(f in p1_morphism(), p in point(2, 6)) {
        let a = canonical_height(&f, &p, 1e-3, 1 << 16).unwrap();
        let b = canonical_height(&f, &f.eval(&p).unwrap(), 1e-3, 1 << 16).unwrap();
        let d = f.degree() as f64;
        prop_assert_eq!(a.bound_kind, BoundKind::CertifiedP1);
        prop_assert!(a.value >= 0.0);
        prop_assert!(
            (b.value - d * a.value).abs() <= b.error_bound + d * a.error_bound + 1e-9,
            "{} vs {} ({} {})", b.value, d * a.value, b.error_bound, a.error_bound
        );
    }

    #[test]
    fn preperiodic_points_have_zero_height(f in p1_morphism(), p in point(2, 4)) {
        let h = canonical_height(&f, &p, 1e-3, 1 << 16).unwrap();
        let status = is_preperiodic(&f, &p, 24, 1 << 16).unwrap();
        match status {
            Preperiodicity::Preperiodic { .. } => prop_assert!(h.value <= h.error_bound),
            Preperiodicity::HeightEscape { lower_bound } => {
                prop_assert!(lower_bound > 0.0);
                prop_assert!(h.value + h.error_bound >= lower_bound - 1e-9);
            }
            Preperiodicity::NotWithinBudget => {}
        }
        if h.lower() > 1e-6 && h.bound_kind == BoundKind::CertifiedP1 {
            let cyclic = matches!(status, Preperiodicity::Preperiodic { .. });
            prop_assert!(!cyclic);
        }
    }

    #[test]
    fn orbits_are_consistent(f in p1_morphism(), p in point(2, 5)) {
        let rec = orbit(&f, &p, 12, 1 << 14).unwrap();
        for w in rec.points.windows(2) {
            prop_assert_eq!(&f.eval(&w[0]).unwrap(), &w[1]);
        }
        for (q, h) in rec.points.iter().zip(&rec.heights) {
            prop_assert_eq!(weil_height(q), *h);
        }
        if let Termination::CycleDetected { entry, period } = rec.termination {
            prop_assert!(period >= 1 && entry + period <= rec.points.len());
            prop_assert_eq!(&f.eval(rec.points.last().unwrap()).unwrap(), &rec.points[entry]);
        }
    }
}

#[test]
fn arithmetic_degree_is_tail_invariant() {
    let cases = [
        (xyz(&["x^2", "y^2", "z^2"]), vec![2i64, 3, 1], 16usize),
        (map_of(&["x", "y"], &["x^2 + y^2", "y^2"]), vec![1, 1], 16),
        (map_of(&["x", "y"], &["x^3 - x*y^2 + y^3", "y^3"]), vec![2, 1], 11),
    ];
    for (f, start, n) in cases {
        let rec = orbit(&f, &ProjPoint::from_i64(&start).unwrap(), n, 1 << 20).unwrap();
        let a = arith_degree_estimate(&rec).unwrap();
        let b = arith_degree_estimate(&rec.shifted(3)).unwrap();
        assert!(matches!(a.convergence, Convergence::Converged(_)), "{f}");
        assert!(matches!(b.convergence, Convergence::Converged(_)), "{f}");
        let (ra, rb) = (a.ratio_series.last().unwrap(), b.ratio_series.last().unwrap());
        assert!((ra - rb).abs() < 1e-2, "{f}: {ra} vs {rb}");
        assert!((ra - f.degree() as f64).abs() < 1e-2);
        // the root estimates only differ by the reindexing h'_n = h_(n+3)
        for (i, r) in b.root_series.iter().enumerate() {
            let want = a.root_series[i + 3].powf((i + 4) as f64 / (i + 1) as f64);
            assert!((r - want).abs() <= 1e-9 * want, "{f}: {r} vs {want}");
        }
    }
}

#[test]
fn squaring_map_heights_are_exact() {
    let f = map_of(&["x", "y"], &["x^2", "y^2"]);
    let h = canonical_height(&f, &ProjPoint::from_i64(&[2, 1]).unwrap(), 1e-10, 1 << 20).unwrap();
    assert_eq!(h.bound_kind, BoundKind::CertifiedP1);
    assert!(h.error_bound <= 1e-10);
    assert!((h.value - 2f64.ln()).abs() <= 1e-12);
}
