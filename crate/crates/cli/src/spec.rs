//! Experiment specifications, as read from `*.json` spec files or built
//! from command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use deglab_core::maps::{DegreeBudget, MapDocument};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    DegreeGrowth,
    DynDeg,
    Orbit,
    ArithDeg,
    CanonicalHeight,
    ShibataFit,
    ModPCompare,
    GcdRatio,
    MonomialAnalyze,
    CritHeightP1,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::DegreeGrowth => "degree-growth",
            ExperimentKind::DynDeg => "dyn-deg",
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::ArithDeg => "arith-deg",
            ExperimentKind::CanonicalHeight => "canonical-height",
            ExperimentKind::ShibataFit => "shibata-fit",
            ExperimentKind::ModPCompare => "mod-p-compare",
            ExperimentKind::GcdRatio => "gcd-ratio",
            ExperimentKind::MonomialAnalyze => "monomial-analyze",
            ExperimentKind::CritHeightP1 => "crit-height-p1",
        }
    }

    fn needs_points(self) -> bool {
        matches!(
            self,
            ExperimentKind::Orbit
                | ExperimentKind::ArithDeg
                | ExperimentKind::CanonicalHeight
                | ExperimentKind::ShibataFit
                | ExperimentKind::GcdRatio
        )
    }
}

/// A map given inline or as a path to a `.map.json` document. Relative
/// paths are resolved against the directory of the spec file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    Path(String),
    Inline(MapDocument),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    pub n_max: usize,
    pub bit_budget: u64,
    pub degree_cap: u32,
    pub coeff_bits: u64,
    pub tol: f64,
    /// Length of the degree sequence behind the `δ` bound of an
    /// arithmetic-degree run.
    pub degree_n_max: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            n_max: 12,
            bit_budget: 1 << 20,
            degree_cap: 64,
            coeff_bits: 1_000_000,
            tol: 1e-6,
            degree_n_max: 12,
        }
    }
}

impl Budgets {
    pub fn degree_budget(&self) -> DegreeBudget {
        DegreeBudget {
            degree_cap: self.degree_cap,
            coeff_bits: self.coeff_bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ExperimentKind,
    pub map: MapSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
    /// Generators of the subvariety of a gcd-ratio run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subvariety: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    /// `δ` for a Shibata fit; estimated from the degree sequence if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, map: MapSource) -> Self {
        ExperimentSpec {
            name: None,
            kind,
            map,
            points: Vec::new(),
            subvariety: None,
            primes: Vec::new(),
            delta: None,
            window: None,
            budgets: Budgets::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.as_str().to_string())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let b = &self.budgets;
        let bad = |what: &str| Err(CliError::Spec(format!("{what} must be positive")));
        if b.n_max == 0 {
            return bad("n_max");
        }
        if b.bit_budget == 0 {
            return bad("bit_budget");
        }
        if b.degree_cap == 0 {
            return bad("degree_cap");
        }
        if b.coeff_bits == 0 {
            return bad("coeff_bits");
        }
        if b.degree_n_max == 0 {
            return bad("degree_n_max");
        }
        if !(b.tol > 0.0 && b.tol.is_finite()) {
            return bad("tol");
        }
        if self.kind.needs_points() && self.points.is_empty() {
            return Err(CliError::Spec(format!("{} needs at least one point", self.kind.as_str())));
        }
        if self.kind == ExperimentKind::ModPCompare && self.primes.is_empty() {
            return Err(CliError::Spec("mod-p-compare needs primes".into()));
        }
        if self.kind == ExperimentKind::GcdRatio && self.subvariety.is_none() {
            return Err(CliError::Spec("gcd-ratio needs a subvariety".into()));
        }
        Ok(())
    }

    /// Load the map document, resolving a path against `base`.
    pub fn map_document(&self, base: Option<&Path>) -> Result<MapDocument, CliError> {
        match &self.map {
            MapSource::Inline(doc) => Ok(doc.clone()),
            MapSource::Path(p) => {
                let path = match base {
                    Some(dir) if Path::new(p).is_relative() => dir.join(p),
                    _ => PathBuf::from(p),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                MapDocument::from_json(&text).map_err(CliError::from)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_defaults() {
        let text = r#"{"kind": "degree-growth", "map": "maps/linear.map.json", "budgets": {"n_max": 6}}"#;
        let s = ExperimentSpec::from_json(text).unwrap();
        assert_eq!(s.budgets.n_max, 6);
        assert_eq!(s.budgets.degree_cap, 64);
        assert_eq!(s.map, MapSource::Path("maps/linear.map.json".into()));
        assert_eq!(ExperimentSpec::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn inline_maps() {
        let text = r#"{"kind": "orbit", "map": {"coords": ["x^2", "y^2"]}, "points": ["2,1"]}"#;
        let s = ExperimentSpec::from_json(text).unwrap();
        assert!(matches!(s.map, MapSource::Inline(_)));
        s.validate().unwrap();
    }

    #[test]
    fn rejects_bad_budgets() {
        let mut s = ExperimentSpec::new(ExperimentKind::DegreeGrowth, MapSource::Path("m".into()));
        s.budgets.n_max = 0;
        assert!(matches!(s.validate(), Err(CliError::Spec(_))));
        let s = ExperimentSpec::new(ExperimentKind::Orbit, MapSource::Path("m".into()));
        assert!(s.validate().is_err());
    }
}
