use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{MapError, RationalMap};
use crate::algebra::enclosure::nth_root_upper;
use crate::algebra::Coeff;
use crate::series::{aitken, linear_fit, poly_fit};

/// Limits for iterating a map symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBudget {
    pub degree_cap: u32,
    /// Per-coordinate coefficient size limit.
    pub coeff_bits: u64,
}

impl Default for DegreeBudget {
    fn default() -> Self {
        DegreeBudget {
            degree_cap: 64,
            coeff_bits: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    DegreeCap { degree: u32 },
    CoefficientBits { bits: u64 },
}

/// Where a budgeted iteration stopped: iterate `at_n` was computed but not
/// recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetStop {
    pub at_n: usize,
    pub reason: StopReason,
}

/// `deg(f^1), ..., deg(f^n)`, possibly cut short by the budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub map_name: Option<String>,
    pub degrees: Vec<u32>,
    pub stopped: Option<BudgetStop>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Self {
        DegreeSequence {
            map_name: None,
            degrees,
            stopped: None,
        }
    }

    /// `deg(f^n)`, one-based.
    pub fn degree(&self, n: usize) -> Option<u32> {
        n.checked_sub(1).and_then(|i| self.degrees.get(i).copied())
    }

    /// Every pair `m + n <= len` satisfies `deg(f^(m+n)) <= deg(f^m) deg(f^n)`.
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degrees;
        (1..=d.len()).all(|m| {
            (1..=d.len() - m).all(|n| (d[m + n - 1] as u64) <= d[m - 1] as u64 * d[n - 1] as u64)
        })
    }

    /// Degrees equal `deg(f)^n` throughout.
    pub fn consistent_with_morphism(&self) -> bool {
        let Some(&d) = self.degrees.first() else {
            return false;
        };
        let mut expect = 1u64;
        self.degrees.iter().all(|&x| {
            expect = expect.saturating_mul(d as u64);
            x as u64 == expect
        })
    }
}

const RAW_DEGREE_SLACK: u32 = 2;

/// `[f, f^2, ..., f^n_max]` computed as `f^(n+1) = f ∘ f^n` with full
/// normalization at every step.
pub fn iterate_maps<C: Coeff>(
    f: &RationalMap<C>,
    n_max: usize,
    budget: DegreeBudget,
) -> Result<(Vec<RationalMap<C>>, Option<BudgetStop>), MapError> {
    let mut out: Vec<RationalMap<C>> = Vec::with_capacity(n_max);
    if n_max == 0 {
        return Ok((out, None));
    }
    if let Some(stop) = check_budget(f, 1, budget) {
        return Ok((out, Some(stop)));
    }
    out.push(f.clone());
    for n in 2..=n_max {
        let last = out.last().expect("nonempty");
        // the composite before cancellation; far past the cap it is not worth forming
        let raw = f.degree().saturating_mul(last.degree());
        if raw > budget.degree_cap.saturating_mul(RAW_DEGREE_SLACK) {
            return Ok((
                out,
                Some(BudgetStop {
                    at_n: n,
                    reason: StopReason::DegreeCap { degree: raw },
                }),
            ));
        }
        let next = f.compose(last)?;
        if let Some(stop) = check_budget(&next, n, budget) {
            return Ok((out, Some(stop)));
        }
        out.push(next);
    }
    Ok((out, None))
}

fn check_budget<C: Coeff>(g: &RationalMap<C>, n: usize, budget: DegreeBudget) -> Option<BudgetStop> {
    if g.degree() > budget.degree_cap {
        return Some(BudgetStop {
            at_n: n,
            reason: StopReason::DegreeCap { degree: g.degree() },
        });
    }
    let bits = g.max_coeff_bits();
    if bits > budget.coeff_bits {
        return Some(BudgetStop {
            at_n: n,
            reason: StopReason::CoefficientBits { bits },
        });
    }
    None
}

pub fn degree_sequence<C: Coeff>(
    f: &RationalMap<C>,
    n_max: usize,
    budget: DegreeBudget,
) -> Result<DegreeSequence, MapError> {
    let (iterates, stopped) = iterate_maps(f, n_max, budget)?;
    Ok(DegreeSequence {
        map_name: f.name().map(str::to_string),
        degrees: iterates.iter().map(|g| g.degree()).collect(),
        stopped,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DynamicalDegreeEstimate {
    /// `deg(f^n)^(1/n)` for `n = 1..=n_used`.
    pub root_estimates: Vec<f64>,
    /// `min_n deg(f^n)^(1/n)`, rounded up to a rational. A rigorous upper
    /// bound for the dynamical degree.
    #[serde(serialize_with = "ser_rat")]
    pub certified_upper: BigRational,
    pub certified_upper_f64: f64,
    pub extrapolated: f64,
    pub n_used: usize,
    /// Order `k` when the degrees follow a degree-`k` polynomial in `n`.
    pub polynomial_growth: Option<usize>,
    /// The ratio sequence settled and was Aitken-accelerated.
    pub ratio_converged: bool,
    pub consistent_with_morphism: bool,
}

fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

const RATIO_TOL: f64 = 1e-2;
const POLY_FIT_TOL: f64 = 1e-2;

pub fn dyndeg_estimate(seq: &DegreeSequence) -> Result<DynamicalDegreeEstimate, MapError> {
    let d = &seq.degrees;
    if d.len() < 2 {
        return Err(MapError::TooShort {
            needed: 2,
            found: d.len(),
        });
    }
    let n_used = d.len();
    let root_estimates: Vec<f64> = d
        .iter()
        .enumerate()
        .map(|(i, &x)| (x as f64).powf(1.0 / (i + 1) as f64))
        .collect();
    let certified_upper = d
        .iter()
        .enumerate()
        .map(|(i, &x)| nth_root_upper(&BigRational::from_integer(BigInt::from(x)), (i + 1) as u32))
        .min()
        .expect("nonempty");
    let certified_upper_f64 = certified_upper.to_f64().unwrap_or(f64::INFINITY);

    let ns: Vec<f64> = (1..=n_used).map(|n| n as f64).collect();
    let ys: Vec<f64> = d.iter().map(|&x| x as f64).collect();
    let polynomial_growth = (0..=3usize)
        .filter(|k| n_used >= k + 3)
        .find(|&k| poly_fit(&ns, &ys, k).is_some_and(|(_, worst)| worst < POLY_FIT_TOL));

    let ratios: Vec<f64> = d.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    let last_ratio = *ratios.last().expect("at least one ratio");
    let settled = ratios.len() >= 2 && {
        let prev = ratios[ratios.len() - 2];
        (last_ratio - prev).abs() <= RATIO_TOL * last_ratio
    };
    let (mut extrapolated, ratio_converged) = if polynomial_growth.is_some() {
        (1.0, false)
    } else if settled {
        let acc = aitken(&ratios);
        (acc.last().copied().unwrap_or(last_ratio), true)
    } else {
        // deg(f^n) ~ C lambda^n with oscillating ratios: the slope of
        // log deg over the tail drops the constant C
        let half = n_used / 2;
        let tail_fit = (n_used - half >= 3)
            .then(|| {
                let logs: Vec<f64> = ys[half..].iter().map(|y| y.ln()).collect();
                linear_fit(&ns[half..], &logs)
            })
            .flatten();
        match tail_fit {
            Some(fit) => (fit.slope.exp(), false),
            None => (*root_estimates.last().expect("nonempty"), false),
        }
    };
    if extrapolated > certified_upper_f64 {
        extrapolated = certified_upper_f64;
    }
    if extrapolated < 1.0 {
        extrapolated = 1.0;
    }
    Ok(DynamicalDegreeEstimate {
        root_estimates,
        certified_upper,
        certified_upper_f64,
        extrapolated,
        n_used,
        polynomial_growth,
        ratio_converged,
        consistent_with_morphism: seq.consistent_with_morphism(),
    })
}
