//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process exits nonzero if a criterion fails, except the ones listed in
//! `KNOWN_UNATTAINABLE`, whose attainable parts are still required.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deglab_cli::corpus::spec_files;
use deglab_cli::{ExperimentKind, ExperimentSpec};
use deglab_core::exec::Exec;
use deglab_core::gcd_height::{gcd_height, gcd_ratio_series, summarize, SubvarietySpec};
use deglab_core::heights::{
    canonical_height, critical_height_p1, is_preperiodic, orbit, shibata_ell_estimate, shibata_fit_series, BoundKind,
    Preperiodicity,
};
use deglab_core::maps::{degree_sequence, DegreeBudget, MapDocument, RationalMap};
use deglab_core::modp::{compare_dyndeg, PrimeOutcome};
use deglab_core::monomial::{check_log_concavity, MonomialMap};
use deglab_core::{BigRat, ProjPoint};

/// Criteria whose headline threshold cannot be met: the canonical height of
/// 0 under z^2 + 1 is 0.2036..., below the required 0.3.
const KNOWN_UNATTAINABLE: [u32; 2] = [7, 8];

const PRIMES: [u64; 5] = [2, 3, 5, 7, 101];
const KS_SLACK: f64 = 0.05;
const DELTA1_TOL: f64 = 1e-6;
const SHIBATA_TOL: f64 = 0.05;
const GOLDEN_LIMIT: Duration = Duration::from_secs(5);
const HEIGHT_LIMIT: Duration = Duration::from_secs(1);

const XYZ: [&str; 3] = ["x", "y", "z"];
const LINEAR: [&str; 3] = ["x*y + x*z", "y*z + z^2", "z^2"];

struct Outcome {
    pass: bool,
    detail: String,
    /// Sub-checks that must hold even when the criterion as a whole cannot.
    required_ok: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            required_ok: pass,
        }
    }
}

fn xyz(coords: &[&str]) -> RationalMap {
    MapDocument::polynomial(None, &XYZ, coords).to_map().unwrap()
}

fn p1(coords: &[&str]) -> RationalMap {
    MapDocument::polynomial(None, &["x", "y"], coords).to_map().unwrap()
}

fn pt(c: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(c).unwrap()
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_maps() -> Vec<(String, MapDocument)> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir().join("maps"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    for p in paths {
        let doc = MapDocument::from_json(&std::fs::read_to_string(&p).unwrap()).unwrap();
        out.push((p.file_name().unwrap().to_string_lossy().into_owned(), doc));
    }
    out
}

fn corpus_specs() -> Vec<ExperimentSpec> {
    spec_files(&corpus_dir().join("specs"))
        .unwrap()
        .iter()
        .map(|p| ExperimentSpec::from_json(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect()
}

/// Output of `deglab corpus --reproducible`, one run per slot.
fn corpus_output(slot: usize) -> &'static (tempfile::TempDir, i32) {
    static RUNS: [OnceLock<(tempfile::TempDir, i32)>; 2] = [OnceLock::new(), OnceLock::new()];
    RUNS[slot].get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_deglab"))
            .arg("corpus")
            .arg(corpus_dir().join("specs"))
            .arg("--out")
            .arg(dir.path())
            .args(["--format", "csv,json,svg", "--reproducible"])
            .output()
            .unwrap()
            .status;
        (dir, status.code().unwrap_or(-1))
    })
}

fn degree_growth_golden() -> Outcome {
    let t = Instant::now();
    let seq = degree_sequence(&xyz(&LINEAR), 12, DegreeBudget::default()).unwrap();
    let elapsed = t.elapsed();
    let want: Vec<u32> = (2..=13).collect();
    Outcome::new(
        seq.degrees == want && elapsed < GOLDEN_LIMIT,
        format!("degrees {:?}, {:.3} s (limit 5 s)", seq.degrees, elapsed.as_secs_f64()),
    )
}

fn orbit_golden() -> Outcome {
    let rec = orbit(&xyz(&LINEAR), &pt(&[1, 0, 1]), 12, 1 << 20).unwrap();
    let mut fact = BigInt::one();
    let mut log_fact = 0.0f64;
    let mut exact = rec.points.len() == 13;
    let mut worst = 0.0f64;
    for n in 0..=12usize {
        if n > 0 {
            fact *= n;
            log_fact += (n as f64).ln();
        }
        let want = ProjPoint::new(vec![fact.clone(), BigInt::from(n), BigInt::one()]).unwrap();
        exact &= rec.points.get(n) == Some(&want);
        let err = (rec.heights[n] - log_fact).abs() / log_fact.max(1.0);
        worst = worst.max(err);
    }
    Outcome::new(
        exact && worst <= 1e-12,
        format!("points [n!, n, 1] exact: {exact}; worst relative height error {worst:.2e} (limit 1e-12)"),
    )
}

fn morphism_degree_law() -> Outcome {
    let budget = DegreeBudget {
        degree_cap: 256,
        ..DegreeBudget::default()
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for d in [2u32, 3] {
        let e = d.to_string();
        let f = xyz(&[&format!("x^{e}"), &format!("y^{e}"), &format!("z^{e}")]);
        let seq = degree_sequence(&f, 5, budget).unwrap();
        let want: Vec<u32> = (1..=5).map(|n| d.pow(n)).collect();
        ok &= seq.degrees == want;
        detail.push(format!("d={d}: {:?}", seq.degrees));
    }
    Outcome::new(ok, detail.join("; "))
}

/// Largest eigenvalue modulus of a 2x2 matrix in floating point.
fn rho_2x2(a: [[i64; 2]; 2]) -> f64 {
    let t = (a[0][0] + a[1][1]) as f64;
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) as f64;
    let disc = t * t / 4.0 - det;
    if disc >= 0.0 {
        (t / 2.0).abs() + disc.sqrt()
    } else {
        det.abs().sqrt()
    }
}

fn monomial_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let tol = BigRat::new(BigInt::one(), BigInt::from(10).pow(8));
    let wide = DegreeBudget {
        degree_cap: 1 << 20,
        coeff_bits: 64,
    };
    let (mut tested, mut bad_degree, mut bad_delta1, mut bad_top) = (0, 0, 0, 0);
    let mut worst_miss = 0.0f64;
    while tested < 20 {
        let a: [[i64; 2]; 2] = [[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0 {
            continue;
        }
        tested += 1;
        let m = MonomialMap::from_i64_rows(&[a[0].to_vec(), a[1].to_vec()]).unwrap();
        let seq = degree_sequence(&m.homogenize().unwrap(), 6, wide).unwrap();
        let by_matrix: Vec<u32> = (1..=6).map(|n| m.degree_of_power(n)).collect();
        if seq.degrees != by_matrix {
            bad_degree += 1;
        }
        let d = m.dynamical_degrees(&tol).unwrap();
        let oracle = rho_2x2(a);
        if !d.deltas[1].contains_f64(oracle, DELTA1_TOL) {
            bad_delta1 += 1;
            worst_miss = worst_miss.max((d.deltas[1].midpoint_f64() - oracle).abs());
        }
        if !(d.deltas[2].is_exact() && d.deltas[2].lower() == &BigRat::from_integer(BigInt::from(det.abs()))) {
            bad_top += 1;
        }
    }
    Outcome::new(
        bad_degree + bad_delta1 + bad_top == 0,
        format!(
            "{tested} matrices; degree mismatches {bad_degree}, delta_1 misses {bad_delta1} (tol 1e-6, worst {worst_miss:.1e}), delta_2 != |det| {bad_top}"
        ),
    )
}

fn log_concavity() -> Outcome {
    let tol = BigRat::new(BigInt::one(), BigInt::from(10).pow(8));
    let mut ok = true;
    let mut lines = Vec::new();
    let mut dims = BTreeSet::new();
    for (name, doc) in corpus_maps() {
        let Some(a) = doc.matrix().unwrap() else { continue };
        let m = MonomialMap::new(a).unwrap();
        dims.insert(m.dim());
        let verdict = m
            .dynamical_degrees(&tol)
            .map_err(|e| e.to_string())
            .and_then(|d| check_log_concavity(&d).map_err(|e| e.to_string()));
        match verdict {
            Ok(r) if r.holds() => lines.push(format!("{name} ok")),
            Ok(r) => {
                ok = false;
                lines.push(format!("{name} violated {:?}", r.checks));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name} {e}"));
            }
        }
    }
    ok &= dims.contains(&2) && dims.contains(&3);
    Outcome::new(ok, format!("dims {dims:?}, tol 1e-8: {}", lines.join(", ")))
}

fn ks_inequality() -> Outcome {
    let mut maps = BTreeMap::new();
    for s in corpus_specs().iter().filter(|s| s.kind == ExperimentKind::ArithDeg) {
        *maps.entry(serde_json::to_string(&s.map).unwrap()).or_insert(0) += s.points.len();
    }
    let enough = maps.len() >= 12 && maps.values().all(|&k| k >= 3);
    let (dir, _) = corpus_output(0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("corpus.json")).unwrap()).unwrap();
    let checks: Vec<&serde_json::Value> = report["properties"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["property"] == "ks_inequality")
        .collect();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c["verdict"] != "pass")
        .map(|c| format!("{} {}: {}", c["spec"], c["point"], c["detail"]))
        .collect();
    Outcome::new(
        enough && failed.is_empty() && !checks.is_empty(),
        format!(
            "{} maps, {} points, slack {KS_SLACK}; failures: {}",
            maps.len(),
            checks.len(),
            if failed.is_empty() { "none".into() } else { failed.join("; ") }
        ),
    )
}

fn canonical_exactness() -> Outcome {
    let mut details = Vec::new();
    let mut required = true;

    let t = Instant::now();
    let h = canonical_height(&p1(&["x^2", "y^2"]), &pt(&[2, 1]), 1e-10, 1 << 20).unwrap();
    let dt = t.elapsed();
    let ok = (h.value - 2f64.ln()).abs() <= 1e-12 && h.error_bound <= 1e-10 && h.bound_kind == BoundKind::CertifiedP1;
    required &= ok && dt < HEIGHT_LIMIT;
    details.push(format!("x^2: {} err {:.1e} {:.3} s", h.value, h.error_bound, dt.as_secs_f64()));

    let t = Instant::now();
    let f = p1(&["x^2 - y^2", "y^2"]);
    let pre = is_preperiodic(&f, &pt(&[0, 1]), 16, 1 << 16).unwrap();
    let h = canonical_height(&f, &pt(&[0, 1]), 1e-8, 1 << 20).unwrap();
    let dt = t.elapsed();
    let ok = pre == Preperiodicity::Preperiodic { entry: 0, period: 2 } && h.value == 0.0 && h.preperiodic;
    required &= ok && dt < HEIGHT_LIMIT;
    details.push(format!("z^2-1: {pre:?} value {} {:.3} s", h.value, dt.as_secs_f64()));

    let t = Instant::now();
    let f = p1(&["x^2 + y^2", "y^2"]);
    let pre = is_preperiodic(&f, &pt(&[0, 1]), 16, 1 << 16).unwrap();
    let h = canonical_height(&f, &pt(&[0, 1]), 1e-4, 1 << 20).unwrap();
    let dt = t.elapsed();
    let escape = matches!(pre, Preperiodicity::HeightEscape { lower_bound } if lower_bound > 0.0);
    required &= escape && dt < HEIGHT_LIMIT && h.lower() > 0.0;
    let above = h.lower() > 0.3;
    details.push(format!(
        "z^2+1: {pre:?}, value {:.10} +- {:.1e}, > 0.3: {above} {:.3} s",
        h.value,
        h.error_bound,
        dt.as_secs_f64()
    ));
    Outcome {
        pass: required && above,
        detail: details.join("; "),
        required_ok: required,
    }
}

fn pcf_detection() -> Outcome {
    let mut details = Vec::new();
    let mut required = true;

    let c = critical_height_p1(&p1(&["x^2 - y^2", "y^2"]), 1e-8, 1 << 20).unwrap();
    let set: Vec<String> = c.critical_points_used.iter().map(|p| p.point.to_string()).collect();
    let ok = c.value == 0.0 && c.pcf == Some(true) && !c.irrational_criticals_present && set == ["[0,1]", "[1,0]"];
    required &= ok;
    details.push(format!("z^2-1: crit height {} at {set:?}, pcf {:?}", c.value, c.pcf));

    let c = critical_height_p1(&p1(&["x^2 + y^2", "y^2"]), 1e-6, 1 << 20).unwrap();
    required &= c.pcf == Some(false);
    let above = c.value - c.error_bound > 0.3;
    details.push(format!(
        "z^2+1: crit height {:.10} +- {:.1e}, pcf {:?}, > 0.3: {above}",
        c.value, c.error_bound, c.pcf
    ));

    let c = critical_height_p1(&p1(&["x^3 - 3*x*y^2", "y^3"]), 1e-6, 1 << 20).unwrap();
    let set: Vec<String> = c.critical_points_used.iter().map(|p| p.point.to_string()).collect();
    let ok = set.contains(&"[1,1]".to_string()) && set.contains(&"[1,-1]".to_string()) && !c.irrational_criticals_present;
    required &= ok;
    details.push(format!("z^3-3z: criticals {set:?}, pcf {:?}", c.pcf));
    Outcome {
        pass: required && above,
        detail: details.join("; "),
        required_ok: required,
    }
}

fn gcd_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let z = SubvarietySpec::parse(&["x - z", "y - z"], &XYZ).unwrap();
    let mut mismatches = 0;
    let mut tested = 0;
    while tested < 50 {
        let (a, b): (i64, i64) = (rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(-1_000_000..=1_000_000));
        if a == 1 && b == 1 {
            continue;
        }
        tested += 1;
        let want = BigInt::from(a - 1).gcd(&BigInt::from(b - 1));
        let h = gcd_height(&pt(&[a, b, 1]), &z).unwrap();
        if h.gcd != want || (h.value - want.to_f64().unwrap().ln()).abs() > 1e-12 {
            mismatches += 1;
        }
    }

    let square = xyz(&["x^2", "y^2", "z^2"]);
    let zxy = SubvarietySpec::parse(&["x", "y"], &XYZ).unwrap();
    let mut lee_worst = 0.0f64;
    for (a, b) in [(4i64, 6i64), (12, 18), (-10, 15), (9, 27), (8, 20)] {
        let want = (a.gcd(&b) as f64).ln() / (a.abs().max(b.abs()) as f64).ln();
        let s = gcd_ratio_series(&square, &pt(&[a, b, 1]), &zxy, 8).unwrap();
        for r in &s.records {
            lee_worst = lee_worst.max((r.ratio - want).abs());
        }
    }

    let diag = xyz(&["2*x", "3*y", "z"]);
    let s = gcd_ratio_series(&diag, &pt(&[2, 3, 1]), &z, 199).unwrap();
    let per_n: Vec<f64> = s.records.iter().map(|r| r.h_z / (r.n + 1) as f64).collect();
    let sum = summarize(&per_n);
    let bcz = sum.max < 0.7 * 6f64.ln() && sum.tail_mean < sum.prefix_mean;
    Outcome::new(
        mismatches == 0 && lee_worst <= 1e-12 && bcz,
        format!(
            "{tested} pairs, {mismatches} mismatches; Lee worst deviation {lee_worst:.1e}; BCZ max {:.4} < {:.4}, tail {:.4} < prefix {:.4}",
            sum.max,
            0.7 * 6f64.ln(),
            sum.tail_mean,
            sum.prefix_mean
        ),
    )
}

fn modp_dominance() -> Outcome {
    let budget = DegreeBudget {
        degree_cap: 256,
        coeff_bits: 1 << 16,
    };
    let mut comparisons = 0;
    let mut bad = 0;
    let mut failures = Vec::new();
    for (name, doc) in corpus_maps() {
        let f = doc.to_map().unwrap();
        match compare_dyndeg(&f, &PRIMES, 5, budget, Exec::Parallel) {
            Ok(cmp) => {
                for row in cmp.rows {
                    match row {
                        PrimeOutcome::Report(r) => {
                            comparisons += 1;
                            if r.degrees.iter().zip(&r.char0_degrees).any(|(a, b)| a > b) {
                                failures.push(format!("{name} mod {}", r.p));
                            }
                        }
                        PrimeOutcome::BadReduction { .. } => bad += 1,
                    }
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let cmp = compare_dyndeg(&xyz(&LINEAR), &PRIMES, 8, budget, Exec::Parallel).unwrap();
    let exact = cmp.rows.len() == PRIMES.len()
        && cmp
            .rows
            .iter()
            .all(|r| matches!(r, PrimeOutcome::Report(rep) if rep.agrees_with_char0()));
    Outcome::new(
        failures.is_empty() && exact,
        format!(
            "{comparisons} map/prime pairs, {bad} bad reductions, violations: {}; linear-growth map exact for all p: {exact}",
            if failures.is_empty() { "none".into() } else { failures.join(", ") }
        ),
    )
}

fn shibata_calibration() -> Outcome {
    let mut worst = 0.0f64;
    for ell in [0.0f64, 1.0, 2.0] {
        for delta in [1.0f64, 2.0] {
            let hs: Vec<f64> = (0..=60).map(|n| 3.0 * (n as f64).powf(ell) * delta.powi(n)).collect();
            let est = shibata_fit_series(&hs, delta, (10, 60)).unwrap();
            worst = worst.max((est.ell_estimate - ell).abs());
        }
    }
    let rec = orbit(&xyz(&LINEAR), &pt(&[1, 0, 1]), 200, 1 << 20).unwrap();
    let est = shibata_ell_estimate(&rec, 1.0, None).unwrap();
    let in_range = (1.0..=1.5).contains(&est.ell_estimate);
    Outcome::new(
        worst <= SHIBATA_TOL && in_range && est.nlogn.flagged,
        format!(
            "synthetic worst error {worst:.1e} (tol 0.05); log(n!) ell {:.4} in [1.0, 1.5], n log n flagged {}, integrality gap {:.3} reported only",
            est.ell_estimate, est.nlogn.flagged, est.integrality_gap
        ),
    )
}

fn files_of(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

fn determinism() -> Outcome {
    let (a, code_a) = corpus_output(0);
    let (b, code_b) = corpus_output(1);
    let (fa, fb) = (files_of(a.path()), files_of(b.path()));
    let differing: Vec<&String> = fa.keys().filter(|k| fa.get(*k) != fb.get(*k)).collect();
    let csv_json = fa.keys().filter(|k| k.ends_with(".csv") || k.ends_with(".json")).count();
    Outcome::new(
        fa.keys().eq(fb.keys()) && differing.is_empty() && *code_a == 0 && *code_b == 0 && csv_json > 0,
        format!(
            "{} files ({csv_json} CSV/JSON), exit codes {code_a}/{code_b}, differing: {differing:?}",
            fa.len()
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "degree growth of the linear-growth map", degree_growth_golden),
        (2, "orbit [n!, n, 1] and its heights", orbit_golden),
        (3, "degree law for power maps", morphism_degree_law),
        (4, "monomial degrees and spectra against oracles", monomial_cross_validation),
        (5, "log-concavity of dynamical degrees", log_concavity),
        (6, "arithmetic degree bounded by dynamical degree", ks_inequality),
        (7, "canonical height exactness", canonical_exactness),
        (8, "post-critically finite detection", pcf_detection),
        (9, "gcd height exactness and series", gcd_exactness),
        (10, "reduction mod p never raises degrees", modp_dominance),
        (11, "Shibata fit calibration", shibata_calibration),
        (12, "reproducible corpus output", determinism),
    ];
    let mut hard_failures = Vec::new();
    for (id, name, check) in criteria {
        let t = Instant::now();
        let out = check();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {id:>2} {name} [{:.2} s]: {}", t.elapsed().as_secs_f64(), out.detail);
        let tolerated = KNOWN_UNATTAINABLE.contains(&id) && out.required_ok;
        if !out.pass && !tolerated {
            hard_failures.push(id);
        }
    }
    if hard_failures.is_empty() {
        println!("acceptance: all attainable criteria pass; known unattainable: {KNOWN_UNATTAINABLE:?}");
    } else {
        println!("acceptance: failing criteria {hard_failures:?}");
        std::process::exit(1);
    }
}
