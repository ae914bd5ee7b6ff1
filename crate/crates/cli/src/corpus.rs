//! Running a directory of experiment specs and checking corpus-wide
//! properties.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use deglab_core::exec::Exec;
use deglab_core::maps::MAP_EXTENSION;

use crate::emit::{csv_string, render, Format};
use crate::error::{CliError, EXIT_BUDGET_PARTIAL, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
use crate::pipeline::run;
use crate::report::{RunReport, RunStatus, Table, SCHEMA_VERSION};
use crate::spec::{ExperimentKind, ExperimentSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub spec: String,
    pub point: Option<String>,
    pub property: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub file: String,
    pub name: Option<String>,
    pub kind: Option<ExperimentKind>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_class: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub warnings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub entries: Vec<CorpusEntry>,
    pub properties: Vec<PropertyCheck>,
    pub all_properties_pass: bool,
}

pub struct CorpusRun {
    pub report: CorpusReport,
    /// File stem and outcome of every spec, in file name order.
    pub runs: Vec<(String, Result<RunReport, CliError>)>,
}

impl CorpusRun {
    pub fn exit_code(&self) -> i32 {
        if !self.report.all_properties_pass {
            return EXIT_FAILURE;
        }
        let mut code = EXIT_OK;
        for (_, r) in &self.runs {
            code = code.max(match r {
                Ok(rep) if rep.status == RunStatus::BudgetPartial => EXIT_BUDGET_PARTIAL,
                Ok(_) => EXIT_OK,
                Err(_) => EXIT_INPUT,
            });
        }
        code
    }

    pub fn properties_table(&self) -> Table {
        let mut t = Table::new(&["spec", "point", "property", "verdict", "detail"]);
        for c in &self.report.properties {
            t.push(vec![
                c.spec.clone(),
                c.point.clone().unwrap_or_default(),
                c.property.to_string(),
                match c.verdict {
                    Verdict::Pass => "PASS".into(),
                    Verdict::Fail => "FAIL".into(),
                },
                c.detail.clone(),
            ]);
        }
        t
    }
}

/// Spec files of a directory: `*.json` other than map documents, sorted.
pub fn spec_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if path.is_file() && name.ends_with(".json") && !name.ends_with(MAP_EXTENSION) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("spec");
    name.strip_suffix(".json").unwrap_or(name).to_string()
}

fn run_file(path: &Path) -> Result<RunReport, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let spec = ExperimentSpec::from_json(&text)?;
    run(&spec, path.parent())
}

fn checks_of(report: &RunReport) -> Vec<PropertyCheck> {
    let mut out = Vec::new();
    let s = &report.summary;
    match report.kind {
        ExperimentKind::ArithDeg => {
            let bound = s["delta_upper"].as_f64().unwrap_or(f64::NAN);
            let slack = s["ks_slack"].as_f64().unwrap_or(0.0);
            for e in s["estimates"].as_array().into_iter().flatten() {
                let alpha = e["alpha_bar"].as_f64().unwrap_or(f64::NAN);
                out.push(PropertyCheck {
                    spec: report.name.clone(),
                    point: e["point"].as_str().map(str::to_string),
                    property: "ks_inequality",
                    verdict: if e["ks_holds"] == Value::Bool(true) { Verdict::Pass } else { Verdict::Fail },
                    detail: format!("alpha_bar {alpha} <= delta_upper {bound} + {slack}"),
                });
            }
        }
        ExperimentKind::MonomialAnalyze => {
            let lc = &s["log_concavity"];
            let (verdict, detail) = match lc["holds"].as_bool() {
                Some(true) => (Verdict::Pass, format!("checks {}", lc["checks"])),
                Some(false) => (Verdict::Fail, format!("checks {}", lc["checks"])),
                None => (Verdict::Fail, lc["inconclusive"].as_str().unwrap_or("missing").to_string()),
            };
            out.push(PropertyCheck {
                spec: report.name.clone(),
                point: None,
                property: "log_concavity",
                verdict,
                detail,
            });
        }
        _ => {}
    }
    out
}

/// Run every spec of `dir`. A failing spec is recorded and the rest go on.
pub fn run_corpus(dir: &Path, exec: Exec) -> Result<CorpusRun, CliError> {
    let files = spec_files(dir)?;
    let results = exec.map(&files, |p| run_file(p));
    let mut entries = Vec::new();
    let mut properties = Vec::new();
    let mut runs = Vec::new();
    for (path, res) in files.iter().zip(results) {
        let file = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let entry = match &res {
            Ok(r) => {
                properties.extend(checks_of(r));
                CorpusEntry {
                    file,
                    name: Some(r.name.clone()),
                    kind: Some(r.kind),
                    status: match r.status {
                        RunStatus::Complete => "ok",
                        RunStatus::BudgetPartial => "budget_partial",
                    },
                    spec_hash: Some(r.spec_hash.clone()),
                    error_class: None,
                    error: None,
                    warnings: r.warnings.len(),
                }
            }
            Err(e) => CorpusEntry {
                file,
                name: None,
                kind: None,
                status: "error",
                spec_hash: None,
                error_class: Some(e.class()),
                error: Some(e.to_string()),
                warnings: 0,
            },
        };
        entries.push(entry);
        runs.push((stem(path), res));
    }
    let all_properties_pass = properties.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(CorpusRun {
        report: CorpusReport {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            entries,
            properties,
            all_properties_pass,
        },
        runs,
    })
}

/// Write one file per spec and format, plus `corpus.json` and
/// `properties.csv`.
pub fn write_corpus(run: &CorpusRun, out: &Path, formats: &[Format], reproducible: bool) -> Result<(), CliError> {
    let write = |name: String, text: String| {
        let path = out.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::Io {
        path: out.display().to_string(),
        message: e.to_string(),
    })?;
    for (stem, res) in &run.runs {
        if let Ok(rep) = res {
            for &f in formats {
                write(format!("{stem}.{}", f.extension()), render(rep, f, reproducible)?)?;
            }
        }
    }
    let mut json = serde_json::to_string_pretty(&run.report).expect("corpus report serializes");
    json.push('\n');
    write("corpus.json".into(), json)?;
    write("properties.csv".into(), csv_string(&run.properties_table())?)?;
    Ok(())
}
