//! One pipeline per experiment kind. A run is serial end to end; the corpus
//! runner parallelizes across runs.

use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use deglab_core::exec::Exec;
use deglab_core::gcd_height::{gcd_ratio_series, summarize, SubvarietySpec};
use deglab_core::heights::{
    arith_degree_estimate, canonical_height, critical_height_p1, critical_points_p1, is_preperiodic, orbit,
    shibata_ell_estimate, BoundKind, Convergence, OrbitRecord, Preperiodicity, Termination,
};
use deglab_core::maps::{degree_sequence, dyndeg_estimate, is_dominant, DegreeSequence, MapDocument, StopReason};
use deglab_core::modp::{compare_dyndeg, PrimeOutcome};
use deglab_core::monomial::{check_log_concavity, MonomialError, MonomialMap};
use deglab_core::{ProjPoint, RationalMap};

use crate::error::CliError;
use crate::report::{RunReport, Series, Table};
use crate::spec::{ExperimentKind, ExperimentSpec};

/// Slack allowed between `alpha_bar` and the certified `δ` bound.
pub const KS_SLACK: f64 = 0.05;

const DOMINANCE_TRIALS: usize = 8;

/// Run a spec. Map paths are resolved against `base`.
pub fn run(spec: &ExperimentSpec, base: Option<&Path>) -> Result<RunReport, CliError> {
    spec.validate()?;
    let doc = spec.map_document(base)?;
    let f = doc.to_map()?;
    let points = parse_points(spec, &f)?;
    let mut report = RunReport::new(spec);
    match spec.kind {
        ExperimentKind::DegreeGrowth => degree_growth(spec, &f, &mut report, false),
        ExperimentKind::DynDeg => degree_growth(spec, &f, &mut report, true),
        ExperimentKind::Orbit => orbits(spec, &f, &points, &mut report),
        ExperimentKind::ArithDeg => {
            let bound = delta_upper(spec, &doc, &f, &mut report)?;
            orbits(spec, &f, &points, &mut report)?;
            arith_degrees(spec, &f, &points, bound, &mut report)
        }
        ExperimentKind::CanonicalHeight => canonical_heights(spec, &f, &points, &mut report),
        ExperimentKind::ShibataFit => shibata(spec, &f, &points, &mut report),
        ExperimentKind::ModPCompare => modp(spec, &f, &mut report),
        ExperimentKind::GcdRatio => gcd_ratio(spec, &f, &points, &mut report),
        ExperimentKind::MonomialAnalyze => monomial(spec, &doc, &f, &mut report),
        ExperimentKind::CritHeightP1 => crit_height(spec, &f, &mut report),
    }?;
    Ok(report)
}

fn parse_points(spec: &ExperimentSpec, f: &RationalMap) -> Result<Vec<ProjPoint>, CliError> {
    spec.points
        .iter()
        .map(|s| {
            let p: ProjPoint = s.parse()?;
            if p.dim() != f.dim() {
                return Err(CliError::Spec(format!("point {p} is not in P^{}", f.dim())));
            }
            Ok(p)
        })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn describe_stop(seq: &DegreeSequence) -> Option<String> {
    seq.stopped.map(|s| match s.reason {
        StopReason::DegreeCap { degree } => format!("degree cap reached at n = {} (degree {degree})", s.at_n),
        StopReason::CoefficientBits { bits } => {
            format!("coefficient budget reached at n = {} ({bits} bits)", s.at_n)
        }
    })
}

fn degree_growth(spec: &ExperimentSpec, f: &RationalMap, r: &mut RunReport, estimate: bool) -> Result<(), CliError> {
    let b = &spec.budgets;
    let seq = degree_sequence(f, b.n_max, b.degree_budget())?;
    if let Some(w) = describe_stop(&seq) {
        r.budget_hit(w);
    }
    let dominance = is_dominant(f, DOMINANCE_TRIALS, spec.seed);
    let est = if estimate {
        match dyndeg_estimate(&seq) {
            Ok(e) => Some(e),
            Err(e) => {
                r.warn(format!("no estimate: {e}"));
                None
            }
        }
    } else {
        None
    };
    #[derive(Serialize)]
    struct Row {
        n: usize,
        deg: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        root_est: Option<f64>,
    }
    r.table = if estimate {
        Table::new(&["n", "deg", "root_est"])
    } else {
        Table::new(&["n", "deg"])
    };
    for (i, &d) in seq.degrees.iter().enumerate() {
        let root = est.as_ref().map(|e| e.root_estimates[i]);
        r.record(&Row {
            n: i + 1,
            deg: d,
            root_est: root,
        });
        let mut row = vec![(i + 1).to_string(), d.to_string()];
        if estimate {
            row.push(opt_num(root));
        }
        r.table.push(row);
    }
    r.summary = json!({
        "map": f.to_string(),
        "degrees": seq.degrees,
        "stopped": seq.stopped,
        "submultiplicative": seq.is_submultiplicative(),
        "consistent_with_morphism": seq.consistent_with_morphism(),
        "dominance": dominance,
        "estimate": est,
    });
    r.chart_title = format!("deg(f^n) for {f}");
    r.charts.push(Series {
        label: "deg".into(),
        points: seq.degrees.iter().enumerate().map(|(i, &d)| ((i + 1) as f64, d as f64)).collect(),
    });
    if let Some(e) = &est {
        r.charts.push(Series {
            label: "deg^(1/n)".into(),
            points: e.root_estimates.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v)).collect(),
        });
    }
    Ok(())
}

fn h_plus(h: f64) -> f64 {
    h.max(1.0)
}

fn run_orbit(spec: &ExperimentSpec, f: &RationalMap, p: &ProjPoint, r: &mut RunReport) -> Result<OrbitRecord, CliError> {
    let b = &spec.budgets;
    let rec = orbit(f, p, b.n_max, b.bit_budget)?;
    match rec.termination {
        Termination::Budget => r.budget_hit(format!(
            "orbit of {p} stopped at n = {} by the {}-bit budget",
            rec.last_n(),
            b.bit_budget
        )),
        Termination::Indeterminate { n } => r.warn(format!("orbit of {p} hit the indeterminacy locus at n = {n}")),
        _ => {}
    }
    Ok(rec)
}

fn orbits(
    spec: &ExperimentSpec,
    f: &RationalMap,
    points: &[ProjPoint],
    r: &mut RunReport,
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Row {
        point: String,
        n: usize,
        coords: ProjPoint,
        coord_bits: u64,
        height: f64,
        root_est: Option<f64>,
        ratio_est: Option<f64>,
    }
    r.table = Table::new(&["point", "n", "coord_bits", "height", "root_est", "ratio_est"]);
    let mut summaries = Vec::new();
    for p in points {
        let rec = run_orbit(spec, f, p, r)?;
        let mut roots = Vec::new();
        for (n, q) in rec.points.iter().enumerate() {
            let h = rec.heights[n];
            let root = (n > 0).then(|| h_plus(h).powf(1.0 / n as f64));
            let ratio = (n > 0).then(|| h_plus(h) / h_plus(rec.heights[n - 1]));
            if let Some(v) = root {
                roots.push((n as f64, v));
            }
            r.table.push(vec![
                p.to_string(),
                n.to_string(),
                rec.coord_bits[n].to_string(),
                num(h),
                opt_num(root),
                opt_num(ratio),
            ]);
            r.record(&Row {
                point: p.to_string(),
                n,
                coords: q.clone(),
                coord_bits: rec.coord_bits[n],
                height: h,
                root_est: root,
                ratio_est: ratio,
            });
        }
        summaries.push(json!({
            "point": p.to_string(),
            "last_n": rec.last_n(),
            "termination": rec.termination,
            "final_height": rec.heights.last(),
        }));
        r.charts.push(Series {
            label: format!("h+^(1/n) at {p}"),
            points: roots,
        });
    }
    r.chart_title = format!("orbit heights for {f}");
    r.summary = json!({ "map": f.to_string(), "orbits": summaries });
    Ok(())
}

/// Rigorous upper bound for `δ(f)`: the spectral enclosure for monomial
/// maps, otherwise `min_n deg(f^n)^(1/n)`.
fn delta_upper(spec: &ExperimentSpec, doc: &MapDocument, f: &RationalMap, r: &mut RunReport) -> Result<(f64, &'static str), CliError> {
    if let Some(a) = doc.matrix()? {
        let m = MonomialMap::new(a)?;
        let tol = tolerance(spec.budgets.tol)?;
        let d = m.dynamical_degrees_with(&tol, Exec::Sequential)?;
        return Ok((d.deltas[1].upper_f64(), "spectral"));
    }
    let b = &spec.budgets;
    let seq = degree_sequence(f, b.degree_n_max, b.degree_budget())?;
    if let Some(w) = describe_stop(&seq) {
        r.warn(format!("delta bound from a shortened degree sequence: {w}"));
    }
    let e = dyndeg_estimate(&seq)?;
    Ok((e.certified_upper_f64, "degree_sequence"))
}

fn arith_degrees(
    spec: &ExperimentSpec,
    f: &RationalMap,
    points: &[ProjPoint],
    (bound, source): (f64, &'static str),
    r: &mut RunReport,
) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for p in points {
        let rec = orbit(f, p, spec.budgets.n_max, spec.budgets.bit_budget)?;
        let a = arith_degree_estimate(&rec)?;
        if !matches!(a.convergence, Convergence::Converged(_)) {
            r.warn(format!("ratio estimates at {p} did not settle: {:?}", a.convergence));
        }
        let holds = a.alpha_bar_estimate <= bound + KS_SLACK;
        rows.push(json!({
            "point": p.to_string(),
            "alpha_bar": a.alpha_bar_estimate,
            "last_ratio": a.ratio_series.last(),
            "convergence": a.convergence,
            "preperiodic": a.preperiodic,
            "n_used": rec.last_n(),
            "ks_holds": holds,
        }));
    }
    r.summary["delta_upper"] = json!(bound);
    r.summary["delta_source"] = json!(source);
    r.summary["ks_slack"] = json!(KS_SLACK);
    r.summary["estimates"] = json!(rows);
    Ok(())
}

fn canonical_heights(spec: &ExperimentSpec, f: &RationalMap, points: &[ProjPoint], r: &mut RunReport) -> Result<(), CliError> {
    let b = &spec.budgets;
    #[derive(Serialize)]
    struct Row {
        point: String,
        value: f64,
        error_bound: f64,
        n_used: usize,
        bound_kind: BoundKind,
        tolerance_met: bool,
        preperiodicity: Preperiodicity,
    }
    r.table = Table::new(&["point", "value", "error_bound", "n_used", "bound_kind", "tolerance_met", "status"]);
    for p in points {
        let h = canonical_height(f, p, b.tol, b.bit_budget)?;
        let status = is_preperiodic(f, p, b.n_max, b.bit_budget)?;
        if h.bound_kind != BoundKind::CertifiedP1 {
            r.warn(format!("height at {p} is not certified: bound kind {:?}", h.bound_kind));
        }
        if !h.tolerance_met {
            r.budget_hit(format!(
                "height at {p}: error bound {} above tolerance {} within the bit budget",
                h.error_bound, b.tol
            ));
        }
        let label = match status {
            Preperiodicity::Preperiodic { entry, period } => format!("preperiodic({entry},{period})"),
            Preperiodicity::HeightEscape { lower_bound } => format!("height_escape({lower_bound})"),
            Preperiodicity::NotWithinBudget => "undecided".into(),
        };
        r.table.push(vec![
            p.to_string(),
            num(h.value),
            num(h.error_bound),
            h.n_used.to_string(),
            serde_json::to_value(h.bound_kind).expect("enum").as_str().unwrap_or_default().to_string(),
            h.tolerance_met.to_string(),
            label,
        ]);
        r.record(&Row {
            point: p.to_string(),
            value: h.value,
            error_bound: h.error_bound,
            n_used: h.n_used,
            bound_kind: h.bound_kind,
            tolerance_met: h.tolerance_met,
            preperiodicity: status,
        });
    }
    r.summary = json!({ "map": f.to_string(), "tol": b.tol });
    Ok(())
}

fn shibata(spec: &ExperimentSpec, f: &RationalMap, points: &[ProjPoint], r: &mut RunReport) -> Result<(), CliError> {
    let delta = match spec.delta {
        Some(d) => d,
        None => {
            let seq = degree_sequence(f, spec.budgets.degree_n_max, spec.budgets.degree_budget())?;
            let d = dyndeg_estimate(&seq)?.extrapolated;
            r.warn(format!("delta not given; using the extrapolated estimate {d}"));
            d
        }
    };
    #[derive(Serialize)]
    struct Row {
        point: String,
        n: usize,
        height: f64,
        log_excess: Option<f64>,
    }
    r.table = Table::new(&["point", "n", "height", "log_excess"]);
    let mut fits = Vec::new();
    for p in points {
        let rec = run_orbit(spec, f, p, r)?;
        let mut series = Vec::new();
        for (n, &h) in rec.heights.iter().enumerate() {
            let excess = (h > 0.0).then(|| h.ln() - n as f64 * delta.ln());
            if let (Some(e), true) = (excess, n > 0) {
                series.push(((n as f64).ln(), e));
            }
            r.table.push(vec![p.to_string(), n.to_string(), num(h), opt_num(excess)]);
            r.record(&Row {
                point: p.to_string(),
                n,
                height: h,
                log_excess: excess,
            });
        }
        r.charts.push(Series {
            label: format!("log h - n log delta at {p}"),
            points: series,
        });
        match shibata_ell_estimate(&rec, delta, spec.window) {
            Ok(e) => fits.push(json!({ "point": p.to_string(), "fit": e })),
            Err(e) => {
                r.warn(format!("no fit at {p}: {e}"));
                fits.push(json!({ "point": p.to_string(), "error": e.to_string() }));
            }
        }
    }
    r.chart_title = "Shibata fit: log h_n - n log delta against log n".into();
    r.summary = json!({
        "map": f.to_string(),
        "delta": delta,
        "fits": fits,
        "note": "integrality of ell is reported as a distance, not asserted",
    });
    Ok(())
}

fn modp(spec: &ExperimentSpec, f: &RationalMap, r: &mut RunReport) -> Result<(), CliError> {
    let b = &spec.budgets;
    let cmp = compare_dyndeg(f, &spec.primes, b.n_max, b.degree_budget(), Exec::Sequential)?;
    if let Some(w) = describe_stop(&cmp.char0) {
        r.budget_hit(format!("characteristic zero: {w}"));
    }
    #[derive(Serialize)]
    struct Row {
        map: String,
        p: u64,
        n: usize,
        deg_mod_p: u32,
        deg_char0: u32,
        ratio: f64,
    }
    let name = f.name().map(str::to_string).unwrap_or_else(|| f.to_string());
    r.table = Table::new(&["map", "p", "n", "deg_mod_p", "deg_char0", "ratio"]);
    r.chart_title = format!("deg mod p against characteristic zero for {name}");
    r.charts.push(Series {
        label: "char 0".into(),
        points: cmp.char0.degrees.iter().enumerate().map(|(i, &d)| ((i + 1) as f64, d as f64)).collect(),
    });
    let mut per_prime = Vec::new();
    for row in &cmp.rows {
        match row {
            PrimeOutcome::Report(rep) => {
                for (i, (&a, &c)) in rep.degrees.iter().zip(&rep.char0_degrees).enumerate() {
                    let ratio = a as f64 / c as f64;
                    r.table.push(vec![
                        name.clone(),
                        rep.p.to_string(),
                        (i + 1).to_string(),
                        a.to_string(),
                        c.to_string(),
                        num(ratio),
                    ]);
                    r.record(&Row {
                        map: name.clone(),
                        p: rep.p,
                        n: i + 1,
                        deg_mod_p: a,
                        deg_char0: c,
                        ratio,
                    });
                }
                if rep.degrees.len() < rep.char0_degrees.len() {
                    r.budget_hit(format!("mod {}: sequence cut short by the budget", rep.p));
                }
                if !rep.dominance_verified {
                    r.warn(format!("mod {}: dominance of the reduction not verified", rep.p));
                }
                r.charts.push(Series {
                    label: format!("p = {}", rep.p),
                    points: rep.degrees.iter().enumerate().map(|(i, &d)| ((i + 1) as f64, d as f64)).collect(),
                });
                per_prime.push(json!({
                    "p": rep.p,
                    "agrees_with_char0": rep.agrees_with_char0(),
                    "delta_p_upper": rep.delta_p_upper_f64(),
                    "char0_delta_upper": rep.char0_delta_upper_f64(),
                    "dominance_verified": rep.dominance_verified,
                }));
            }
            PrimeOutcome::BadReduction { p, reason } => {
                r.warn(format!("bad reduction mod {p}: {reason}"));
                per_prime.push(json!({ "p": p, "bad_reduction": reason }));
            }
        }
    }
    r.summary = json!({
        "map": f.to_string(),
        "char0_degrees": cmp.char0.degrees,
        "char0_extrapolated": cmp.char0_extrapolated,
        "primes": per_prime,
    });
    Ok(())
}

fn gcd_ratio(spec: &ExperimentSpec, f: &RationalMap, points: &[ProjPoint], r: &mut RunReport) -> Result<(), CliError> {
    let gens = spec.subvariety.as_ref().expect("validated");
    let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
    let vars: Vec<&str> = f.vars().iter().map(String::as_str).collect();
    let z = SubvarietySpec::parse(&gens, &vars)?;
    #[derive(Serialize)]
    struct Row {
        point: String,
        n: usize,
        h_z: f64,
        h_h: f64,
        ratio: f64,
    }
    r.table = Table::new(&["point", "n", "h_Z", "h_H", "ratio"]);
    let mut sums = Vec::new();
    for p in points {
        let s = gcd_ratio_series(f, p, &z, spec.budgets.n_max)?;
        for rec in &s.records {
            r.table.push(vec![p.to_string(), rec.n.to_string(), num(rec.h_z), num(rec.h_h), num(rec.ratio)]);
            r.record(&Row {
                point: p.to_string(),
                n: rec.n,
                h_z: rec.h_z,
                h_h: rec.h_h,
                ratio: rec.ratio,
            });
        }
        let per_step: Vec<f64> = s.records.iter().map(|x| x.h_z / (x.n + 1) as f64).collect();
        sums.push(json!({
            "point": p.to_string(),
            "ratio": s.summary,
            "h_z_per_step": summarize(&per_step),
        }));
        r.charts.push(Series {
            label: format!("h_Z / h at {p}"),
            points: s.records.iter().map(|x| (x.n as f64, x.ratio)).collect(),
        });
    }
    r.chart_title = format!("gcd height ratio for {f}");
    r.summary = json!({ "map": f.to_string(), "subvariety": gens, "series": sums });
    Ok(())
}

fn tolerance(tol: f64) -> Result<BigRational, CliError> {
    BigRational::from_float(tol).ok_or_else(|| CliError::Spec(format!("bad tolerance {tol}")))
}

fn monomial(spec: &ExperimentSpec, doc: &MapDocument, f: &RationalMap, r: &mut RunReport) -> Result<(), CliError> {
    let a = doc
        .matrix()?
        .ok_or_else(|| CliError::Spec("monomial-analyze needs a monomial map document".into()))?;
    let m = MonomialMap::new(a)?;
    let tol = tolerance(spec.budgets.tol)?;
    let d = match m.dynamical_degrees_with(&tol, Exec::Sequential) {
        Ok(d) => d,
        Err(MonomialError::ToleranceNotReached { k, partial }) => {
            r.budget_hit(format!("delta_{k} did not reach tolerance {}", spec.budgets.tol));
            *partial
        }
        Err(e) => return Err(e.into()),
    };
    #[derive(Serialize)]
    struct Row {
        k: usize,
        delta_lower: f64,
        delta_upper: f64,
        dominant_repeated: bool,
    }
    r.table = Table::new(&["k", "delta_lower", "delta_upper", "dominant_repeated"]);
    for (k, e) in d.deltas.iter().enumerate() {
        let rep = d.dominant_repeated.get(k).copied().unwrap_or(false);
        r.table.push(vec![k.to_string(), num(e.lower_f64()), num(e.upper_f64()), rep.to_string()]);
        r.record(&Row {
            k,
            delta_lower: e.lower_f64(),
            delta_upper: e.upper_f64(),
            dominant_repeated: rep,
        });
    }
    let concavity = match check_log_concavity(&d) {
        Ok(c) => json!({ "holds": c.holds(), "checks": c.checks, "peak": c.peak, "unimodal": c.unimodal }),
        Err(e) => {
            r.warn(format!("log-concavity inconclusive: {e}"));
            json!({ "inconclusive": e.to_string() })
        }
    };
    let n = spec.budgets.n_max;
    let matrix_degrees: Vec<u32> = (1..=n as u32).map(|k| m.degree_of_power(k)).collect();
    let symbolic = degree_sequence(f, n, spec.budgets.degree_budget())?;
    if let Some(w) = describe_stop(&symbolic) {
        r.warn(format!("symbolic cross-check shortened: {w}"));
    }
    let agrees = symbolic.degrees.iter().zip(&matrix_degrees).all(|(a, b)| a == b);
    if !agrees {
        r.warn("matrix and symbolic degree sequences disagree");
    }
    r.chart_title = "dynamical degrees delta_k".into();
    r.charts.push(Series {
        label: "delta_k".into(),
        points: d.deltas.iter().enumerate().map(|(k, e)| (k as f64, e.midpoint_f64())).collect(),
    });
    r.summary = json!({
        "matrix": doc.a,
        "deltas": d.deltas,
        "topological_degree": d.topological.to_string(),
        "log_concavity": concavity,
        "degree_of_power": matrix_degrees,
        "symbolic_degrees": symbolic.degrees,
        "symbolic_agrees": agrees,
    });
    Ok(())
}

fn crit_height(spec: &ExperimentSpec, f: &RationalMap, r: &mut RunReport) -> Result<(), CliError> {
    let b = &spec.budgets;
    let crit = critical_points_p1(f)?;
    let h = critical_height_p1(f, b.tol, b.bit_budget)?;
    if h.irrational_criticals_present {
        r.warn(format!(
            "critical points of degree {:?} are not rational; the critical height is partial",
            crit.irrational_factor_degrees
        ));
    }
    #[derive(Serialize)]
    struct Row {
        point: String,
        multiplicity: u32,
        height: f64,
        error_bound: f64,
        bound_kind: BoundKind,
        preperiodic: bool,
    }
    r.table = Table::new(&["point", "multiplicity", "height", "error_bound", "preperiodic"]);
    for (c, v) in h.critical_points_used.iter().zip(&h.heights) {
        if !v.tolerance_met {
            r.budget_hit(format!("height of critical point {} above tolerance", c.point));
        }
        r.table.push(vec![
            c.point.to_string(),
            c.multiplicity.to_string(),
            num(v.value),
            num(v.error_bound),
            v.preperiodic.to_string(),
        ]);
        r.record(&Row {
            point: c.point.to_string(),
            multiplicity: c.multiplicity,
            height: v.value,
            error_bound: v.error_bound,
            bound_kind: v.bound_kind,
            preperiodic: v.preperiodic,
        });
    }
    r.summary = json!({
        "map": f.to_string(),
        "critical_height": h.value,
        "error_bound": h.error_bound,
        "pcf": h.pcf,
        "irrational_criticals_present": h.irrational_criticals_present,
        "irrational_factor_degrees": crit.irrational_factor_degrees,
    });
    Ok(())
}
