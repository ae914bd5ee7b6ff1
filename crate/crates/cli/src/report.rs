//! Run reports and the tables and series they carry.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::spec::{ExperimentKind, ExperimentSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Complete,
    /// A budget stopped some computation before the requested length.
    BudgetPartial,
}

/// Rows emitted as CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// One polyline of a chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub spec_hash: String,
    pub tool_version: &'static str,
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub status: RunStatus,
    pub records: Vec<Value>,
    pub summary: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub table: Table,
    #[serde(skip)]
    pub charts: Vec<Series>,
    #[serde(skip)]
    pub chart_title: String,
}

impl RunReport {
    pub fn new(spec: &ExperimentSpec) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            spec_hash: spec_hash(spec),
            tool_version: env!("CARGO_PKG_VERSION"),
            name: spec.label(),
            kind: spec.kind,
            seed: spec.seed,
            status: RunStatus::Complete,
            records: Vec::new(),
            summary: Value::Null,
            warnings: Vec::new(),
            table: Table::default(),
            charts: Vec::new(),
            chart_title: String::new(),
        }
    }

    pub fn record<T: Serialize>(&mut self, r: &T) {
        self.records.push(serde_json::to_value(r).expect("record serializes"));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// Warn and mark the run as cut short by a budget.
    pub fn budget_hit(&mut self, w: impl Into<String>) {
        self.status = RunStatus::BudgetPartial;
        self.warn(w);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Hex SHA-256 of the compact JSON form of the spec.
pub fn spec_hash(spec: &ExperimentSpec) -> String {
    let text = serde_json::to_string(spec).expect("spec serializes");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::MapSource;

    #[test]
    fn hash_tracks_the_spec() {
        let mut a = ExperimentSpec::new(ExperimentKind::Orbit, MapSource::Path("m.map.json".into()));
        let h = spec_hash(&a);
        assert_eq!(h.len(), 64);
        assert_eq!(h, spec_hash(&a.clone()));
        a.seed = 7;
        assert_ne!(h, spec_hash(&a));
    }
}
