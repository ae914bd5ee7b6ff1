use std::collections::HashMap;

use serde::Serialize;

use super::weil_height;
use crate::maps::{MapError, RationalMap};
use crate::point::ProjPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    /// All `n_max` steps were taken.
    Complete,
    /// The next point would have exceeded the bit budget.
    Budget,
    /// `f` is undefined at `points[n]`.
    Indeterminate { n: usize },
    /// `f(points[last]) = points[entry]`; the cycle has length `period`.
    CycleDetected { entry: usize, period: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub map_name: Option<String>,
    pub map_degree: u32,
    pub start: ProjPoint,
    /// `P, f(P), f^2(P), ...`
    pub points: Vec<ProjPoint>,
    pub heights: Vec<f64>,
    pub coord_bits: Vec<u64>,
    pub termination: Termination,
}

impl OrbitRecord {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self.termination, Termination::CycleDetected { .. })
    }

    /// Index of the last computed point.
    pub fn last_n(&self) -> usize {
        self.points.len() - 1
    }

    /// Drop the first `k` points, giving the orbit of `f^k(P)`.
    pub fn shifted(&self, k: usize) -> OrbitRecord {
        let k = k.min(self.last_n());
        let termination = match self.termination {
            Termination::Indeterminate { n } => Termination::Indeterminate { n: n - k },
            Termination::CycleDetected { entry, period } => Termination::CycleDetected {
                entry: entry.saturating_sub(k),
                period,
            },
            other => other,
        };
        OrbitRecord {
            map_name: self.map_name.clone(),
            map_degree: self.map_degree,
            start: self.points[k].clone(),
            points: self.points[k..].to_vec(),
            heights: self.heights[k..].to_vec(),
            coord_bits: self.coord_bits[k..].to_vec(),
            termination,
        }
    }
}

/// Iterate `f` from `p` for up to `n_max` steps. Points whose coordinates
/// would exceed `bit_budget` bits are not recorded. Cycles are detected by
/// exact comparison of canonical coordinates.
pub fn orbit(f: &RationalMap, p: &ProjPoint, n_max: usize, bit_budget: u64) -> Result<OrbitRecord, MapError> {
    if p.dim() != f.dim() {
        return Err(MapError::DimensionMismatch {
            left: f.dim(),
            right: p.dim(),
        });
    }
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    let mut rec = OrbitRecord {
        map_name: f.name().map(str::to_string),
        map_degree: f.degree(),
        start: p.clone(),
        points: vec![p.clone()],
        heights: vec![weil_height(p)],
        coord_bits: vec![p.bits()],
        termination: Termination::Complete,
    };
    seen.insert(p.clone(), 0);
    let d = f.degree() as u64;
    let coeff_bits = f.max_coeff_bits();
    for n in 1..=n_max {
        let cur = rec.points.last().expect("nonempty");
        // evaluation cost is bounded by the unreduced image size
        if cur.bits().saturating_mul(d).saturating_add(coeff_bits) > bit_budget.saturating_mul(4) {
            rec.termination = Termination::Budget;
            break;
        }
        let next = match f.eval(cur) {
            Ok(q) => q,
            Err(MapError::IndeterminatePoint(_)) => {
                rec.termination = Termination::Indeterminate { n: n - 1 };
                return Ok(rec);
            }
            Err(e) => return Err(e),
        };
        if let Some(&entry) = seen.get(&next) {
            rec.termination = Termination::CycleDetected {
                entry,
                period: n - entry,
            };
            return Ok(rec);
        }
        if next.bits() > bit_budget {
            rec.termination = Termination::Budget;
            break;
        }
        seen.insert(next.clone(), n);
        rec.heights.push(weil_height(&next));
        rec.coord_bits.push(next.bits());
        rec.points.push(next);
    }
    Ok(rec)
}
