use serde::Serialize;

use super::{HeightError, OrbitRecord, HEIGHT_FLOOR};
use crate::series::linear_fit;

const MIN_USABLE: usize = 5;
const RATIO_WINDOW: usize = 3;
const DEFAULT_RATIO_TOL: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "tol", rename_all = "snake_case")]
pub enum Convergence {
    Converged(f64),
    Oscillating,
    Insufficient,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArithmeticDegreeEstimate {
    /// `h+(f^n P)^(1/n)` for `n = 1..`, with `h+ = max(h, 1)`.
    pub root_series: Vec<f64>,
    /// `h+(f^(n+1) P) / h+(f^n P)` for `n = 1..`.
    pub ratio_series: Vec<f64>,
    /// Largest root estimate over the last third of the series.
    pub alpha_bar_estimate: f64,
    pub convergence: Convergence,
    pub preperiodic: bool,
}

/// Heights normalized to be at least one, so that `h^(1/n)` measures growth
/// rather than the size of the starting point.
fn h_plus(h: f64) -> f64 {
    let h = if h < HEIGHT_FLOOR { 0.0 } else { h };
    h.max(1.0)
}

pub fn arith_degree_estimate(rec: &OrbitRecord) -> Result<ArithmeticDegreeEstimate, HeightError> {
    arith_degree_estimate_tol(rec, DEFAULT_RATIO_TOL)
}

pub fn arith_degree_estimate_tol(rec: &OrbitRecord, tol: f64) -> Result<ArithmeticDegreeEstimate, HeightError> {
    let hs: Vec<f64> = rec.heights.iter().skip(1).map(|&h| h_plus(h)).collect();
    if rec.is_preperiodic() {
        return Ok(ArithmeticDegreeEstimate {
            root_series: hs.iter().enumerate().map(|(i, h)| h.powf(1.0 / (i + 1) as f64)).collect(),
            ratio_series: hs.windows(2).map(|w| w[1] / w[0]).collect(),
            alpha_bar_estimate: 1.0,
            convergence: Convergence::Converged(0.0),
            preperiodic: true,
        });
    }
    if hs.len() < MIN_USABLE {
        return Err(HeightError::Insufficient {
            needed: MIN_USABLE,
            found: hs.len(),
        });
    }
    let root_series: Vec<f64> = hs.iter().enumerate().map(|(i, h)| h.powf(1.0 / (i + 1) as f64)).collect();
    let ratio_series: Vec<f64> = hs.windows(2).map(|w| w[1] / w[0]).collect();
    let tail = root_series.len().div_ceil(3);
    let alpha_bar_estimate = root_series[root_series.len() - tail..]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let convergence = if ratio_series.len() < RATIO_WINDOW {
        Convergence::Insufficient
    } else {
        let last = &ratio_series[ratio_series.len() - RATIO_WINDOW..];
        let hi = last.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = last.iter().cloned().fold(f64::INFINITY, f64::min);
        if hi - lo < tol {
            Convergence::Converged(tol)
        } else {
            Convergence::Oscillating
        }
    };
    Ok(ArithmeticDegreeEstimate {
        root_series,
        ratio_series,
        alpha_bar_estimate,
        convergence,
        preperiodic: false,
    })
}

/// Local slopes over the two halves of the fit window. A power law gives
/// equal slopes; a logarithmic factor such as `n log n` makes them drift
/// downward.
#[derive(Clone, Debug, Serialize)]
pub struct NLogNDiagnostic {
    pub slope_first_half: f64,
    pub slope_second_half: f64,
    pub drift: f64,
    /// `log log n / log n` at the window ends: the excess over 1 that pure
    /// `n log n` growth would show there.
    pub log_factor_excess: (f64, f64),
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShibataEstimate {
    pub ell_estimate: f64,
    /// RMS residual of the fit.
    pub residual: f64,
    pub fit_window: (usize, usize),
    /// Distance from the estimate to the nearest integer.
    pub integrality_gap: f64,
    pub nlogn: NLogNDiagnostic,
}

const DRIFT_FLAG: f64 = 0.01;

/// Fit `log h_n - n log delta = ell log n + c` over `n` in `window`
/// (inclusive). `heights[n]` is `h(f^n P)`.
pub fn shibata_fit_series(heights: &[f64], delta: f64, window: (usize, usize)) -> Result<ShibataEstimate, HeightError> {
    let (lo, hi) = (window.0.max(1), window.1.min(heights.len().saturating_sub(1)));
    let found = (hi + 1).saturating_sub(lo);
    if hi < lo || found < 8 {
        return Err(HeightError::Insufficient { needed: 8, found });
    }
    let mut xs = Vec::with_capacity(found);
    let mut ys = Vec::with_capacity(found);
    for (n, &h) in heights.iter().enumerate().take(hi + 1).skip(lo) {
        if h < HEIGHT_FLOOR {
            return Err(HeightError::NonpositiveHeights { n });
        }
        xs.push((n as f64).ln());
        ys.push(h.ln() - n as f64 * delta.ln());
    }
    let fit = linear_fit(&xs, &ys).ok_or(HeightError::Insufficient { needed: 8, found })?;
    let mid = xs.len() / 2;
    let first = linear_fit(&xs[..=mid], &ys[..=mid]).map(|f| f.slope).unwrap_or(fit.slope);
    let second = linear_fit(&xs[mid..], &ys[mid..]).map(|f| f.slope).unwrap_or(fit.slope);
    let excess = |n: usize| {
        let l = (n as f64).ln();
        if l > 1.0 {
            l.ln() / l
        } else {
            0.0
        }
    };
    let drift = second - first;
    Ok(ShibataEstimate {
        ell_estimate: fit.slope,
        residual: fit.residual,
        fit_window: (lo, hi),
        integrality_gap: (fit.slope - fit.slope.round()).abs(),
        nlogn: NLogNDiagnostic {
            slope_first_half: first,
            slope_second_half: second,
            drift,
            log_factor_excess: (excess(lo), excess(hi)),
            flagged: fit.slope > 0.5 && drift < -DRIFT_FLAG,
        },
    })
}

/// Per-point Shibata exponent `ell(f, P)` from an orbit. The default window
/// is the last two thirds of the orbit.
pub fn shibata_ell_estimate(
    rec: &OrbitRecord,
    delta: f64,
    window: Option<(usize, usize)>,
) -> Result<ShibataEstimate, HeightError> {
    let last = rec.last_n();
    let window = window.unwrap_or((last / 3 + 1, last));
    shibata_fit_series(&rec.heights, delta, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::orbit;
    use crate::maps::MapDocument;
    use crate::point::ProjPoint;

    fn log_factorials(n: usize) -> Vec<f64> {
        let mut v = vec![0.0];
        for k in 1..=n {
            v.push(v[k - 1] + (k as f64).ln());
        }
        v
    }

    #[test]
    fn factorial_orbit_has_alpha_one() {
        let f = MapDocument::polynomial(None, &["x", "y", "z"], &["x*y + x*z", "y*z + z^2", "z^2"])
            .to_map()
            .unwrap();
        let r = orbit(&f, &ProjPoint::from_i64(&[1, 0, 1]).unwrap(), 60, 1 << 20).unwrap();
        let a = arith_degree_estimate(&r).unwrap();
        assert!(a.alpha_bar_estimate < 1.15 && a.alpha_bar_estimate >= 1.0);
        let longer = orbit(&f, &ProjPoint::from_i64(&[1, 0, 1]).unwrap(), 200, 1 << 20).unwrap();
        let b = arith_degree_estimate(&longer).unwrap();
        assert!(b.alpha_bar_estimate < 1.06 && b.alpha_bar_estimate < a.alpha_bar_estimate);
        let want = log_factorials(60);
        for n in 0..=60 {
            assert!((r.heights[n] - want[n]).abs() <= 1e-12 * want[n].max(1.0));
        }
    }

    #[test]
    fn power_map_orbit_has_alpha_two() {
        let f = MapDocument::polynomial(None, &["x", "y", "z"], &["x^2", "y^2", "z^2"]).to_map().unwrap();
        let r = orbit(&f, &ProjPoint::from_i64(&[2, 3, 1]).unwrap(), 18, 1 << 20).unwrap();
        let a = arith_degree_estimate(&r).unwrap();
        assert!((a.alpha_bar_estimate - 2.0).abs() < 0.02);
        assert!(matches!(a.convergence, Convergence::Converged(_)));
        assert!(a.ratio_series.iter().all(|&q| (q - 2.0).abs() < 1e-12));
    }

    #[test]
    fn preperiodic_orbit_reports_one() {
        let f = MapDocument::polynomial(None, &["x", "z"], &["x^2 - z^2", "z^2"]).to_map().unwrap();
        let r = orbit(&f, &ProjPoint::from_i64(&[0, 1]).unwrap(), 20, 1000).unwrap();
        let a = arith_degree_estimate(&r).unwrap();
        assert!(a.preperiodic);
        assert_eq!(a.alpha_bar_estimate, 1.0);
    }

    #[test]
    fn short_orbits_are_insufficient() {
        let f = MapDocument::polynomial(None, &["x", "y", "z"], &["x^2", "y^2", "z^2"]).to_map().unwrap();
        let r = orbit(&f, &ProjPoint::from_i64(&[2, 3, 1]).unwrap(), 3, 1 << 20).unwrap();
        assert!(matches!(arith_degree_estimate(&r), Err(HeightError::Insufficient { .. })));
    }

    #[test]
    fn fitter_recovers_synthetic_exponents() {
        for ell in [0.0, 1.0, 2.0] {
            for delta in [1.0f64, 2.0] {
                let hs: Vec<f64> = (0..=40).map(|n| 0.7 * (n as f64).powf(ell) * delta.powi(n)).collect();
                let hs: Vec<f64> = hs.into_iter().map(|h| if h == 0.0 { 1.0 } else { h }).collect();
                let s = shibata_fit_series(&hs, delta, (10, 40)).unwrap();
                assert!((s.ell_estimate - ell).abs() < 1e-9, "{ell} {delta}: {}", s.ell_estimate);
                assert!(!s.nlogn.flagged);
            }
        }
    }

    #[test]
    fn factorial_series_is_flagged() {
        let s = shibata_fit_series(&log_factorials(60), 1.0, (10, 60)).unwrap();
        assert!(s.ell_estimate > 1.0 && s.ell_estimate < 1.5, "{}", s.ell_estimate);
        assert!(s.nlogn.flagged);
        assert!(s.residual > 0.0);
    }

    #[test]
    fn nonpositive_heights_are_rejected() {
        let hs = vec![0.0; 20];
        assert_eq!(
            shibata_fit_series(&hs, 1.0, (1, 19)).unwrap_err(),
            HeightError::NonpositiveHeights { n: 1 }
        );
    }
}
