//! Argument parsing and dispatch for the `deglab` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use deglab_core::exec::Exec;

use crate::corpus::{run_corpus, write_corpus};
use crate::emit::{render, Format};
use crate::error::{CliError, EXIT_BUDGET_PARTIAL, EXIT_OK};
use crate::pipeline::run;
use crate::report::{RunReport, RunStatus};
use crate::spec::{ExperimentKind, ExperimentSpec, MapSource};

#[derive(Debug, Parser)]
#[command(name = "deglab", version, about = "Degree growth, dynamical degrees and heights of rational self-maps of P^N")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degrees of the iterates f^n
    DegreeGrowth(RunArgs),
    /// Dynamical degree estimate with a certified upper bound
    Dyndeg(RunArgs),
    /// Orbit heights of rational points
    Orbit(RunArgs),
    /// Arithmetic degree estimates against the dynamical degree
    ArithDegree(RunArgs),
    /// Canonical heights of points for a morphism
    CanonicalHeight(RunArgs),
    /// Fit of the polynomial correction in h(f^n P) ~ n^l delta^n
    ShibataFit(RunArgs),
    /// Degrees of the reductions mod p against characteristic zero
    ModpCompare(RunArgs),
    /// Ratio of the gcd height to the Weil height along orbits
    GcdRatio(RunArgs),
    /// Dynamical degrees of a monomial map
    Monomial(RunArgs),
    /// Critical height of a map of P^1
    CritHeight(RunArgs),
    /// Run an experiment spec file
    Run {
        spec: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every spec of a directory and check corpus-wide properties
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for the output files; without it the report goes to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Leave out the timestamp of SVG charts
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Map document (.map.json)
    #[arg(long)]
    pub map: PathBuf,
    /// Point as "a,b,c"; repeat for several points
    #[arg(long = "point")]
    pub points: Vec<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub bit_budget: Option<u64>,
    #[arg(long)]
    pub degree_cap: Option<u32>,
    /// Length of the degree sequence behind the delta bound
    #[arg(long)]
    pub degree_n_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generator of the subvariety; repeat for each generator
    #[arg(long = "generator")]
    pub generators: Vec<String>,
    /// Dynamical degree used by the Shibata fit
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fit window "lo,hi"
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub name: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl RunArgs {
    pub fn to_spec(&self, kind: ExperimentKind) -> Result<ExperimentSpec, CliError> {
        let mut s = ExperimentSpec::new(kind, MapSource::Path(self.map.display().to_string()));
        s.name = self.name.clone();
        s.points = self.points.clone();
        s.primes = self.primes.clone();
        s.seed = self.seed;
        s.delta = self.delta;
        if !self.generators.is_empty() {
            s.subvariety = Some(self.generators.clone());
        }
        if let Some(w) = &self.window {
            let parts: Vec<&str> = w.split(',').map(str::trim).collect();
            let parsed = match parts.as_slice() {
                [a, b] => a.parse().ok().zip(b.parse().ok()),
                _ => None,
            };
            s.window = Some(parsed.ok_or_else(|| CliError::Spec(format!("bad window '{w}'")))?);
        }
        let b = &mut s.budgets;
        if let Some(v) = self.n_max {
            b.n_max = v;
        }
        if let Some(v) = self.tol {
            b.tol = v;
        }
        if let Some(v) = self.bit_budget {
            b.bit_budget = v;
        }
        if let Some(v) = self.degree_cap {
            b.degree_cap = v;
        }
        if let Some(v) = self.degree_n_max {
            b.degree_n_max = v;
        }
        Ok(s)
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Print to stdout, or write `<name>.<ext>` files under `--out`.
pub fn emit(report: &RunReport, out: &OutputArgs) -> Result<(), CliError> {
    match &out.out {
        None => {
            let f = out.format.first().copied().unwrap_or(Format::Json);
            print!("{}", render(report, f, out.reproducible)?);
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            let formats = if out.format.is_empty() {
                vec![Format::Csv, Format::Json]
            } else {
                out.format.clone()
            };
            for f in formats {
                let path = dir.join(format!("{}.{}", report.name, f.extension()));
                std::fs::write(&path, render(report, f, out.reproducible)?).map_err(|e| io_err(&path, e))?;
            }
        }
    }
    Ok(())
}

fn finish(report: Result<RunReport, CliError>, out: &OutputArgs) -> Result<i32, CliError> {
    let report = report?;
    emit(&report, out)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(match report.status {
        RunStatus::Complete => EXIT_OK,
        RunStatus::BudgetPartial => EXIT_BUDGET_PARTIAL,
    })
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    let kind = match &cmd {
        Command::DegreeGrowth(_) => ExperimentKind::DegreeGrowth,
        Command::Dyndeg(_) => ExperimentKind::DynDeg,
        Command::Orbit(_) => ExperimentKind::Orbit,
        Command::ArithDegree(_) => ExperimentKind::ArithDeg,
        Command::CanonicalHeight(_) => ExperimentKind::CanonicalHeight,
        Command::ShibataFit(_) => ExperimentKind::ShibataFit,
        Command::ModpCompare(_) => ExperimentKind::ModPCompare,
        Command::GcdRatio(_) => ExperimentKind::GcdRatio,
        Command::Monomial(_) => ExperimentKind::MonomialAnalyze,
        Command::CritHeight(_) => ExperimentKind::CritHeightP1,
        Command::Run { spec, output } => {
            let text = std::fs::read_to_string(spec).map_err(|e| io_err(spec, e))?;
            let s = ExperimentSpec::from_json(&text)?;
            return finish(run(&s, spec.parent()), output);
        }
        Command::Corpus { dir, output } => {
            let c = run_corpus(dir, Exec::Parallel)?;
            for (stem, r) in &c.runs {
                if let Err(e) = r {
                    eprintln!("{stem}: {}: {e}", e.class());
                }
            }
            match &output.out {
                Some(out) => {
                    let formats = if output.format.is_empty() {
                        vec![Format::Csv, Format::Json]
                    } else {
                        output.format.clone()
                    };
                    write_corpus(&c, out, &formats, output.reproducible)?;
                }
                None => print!("{}", crate::emit::csv_string(&c.properties_table())?),
            }
            return Ok(c.exit_code());
        }
    };
    let args = match cmd {
        Command::DegreeGrowth(a)
        | Command::Dyndeg(a)
        | Command::Orbit(a)
        | Command::ArithDegree(a)
        | Command::CanonicalHeight(a)
        | Command::ShibataFit(a)
        | Command::ModpCompare(a)
        | Command::GcdRatio(a)
        | Command::Monomial(a)
        | Command::CritHeight(a) => a,
        Command::Run { .. } | Command::Corpus { .. } => unreachable!("handled above"),
    };
    let spec = args.to_spec(kind)?;
    finish(run(&spec, None), &args.output)
}

/// Cap the worker pool from `DEGLAB_THREADS`.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("DEGLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Spec(format!("DEGLAB_THREADS must be a positive integer, got '{v}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Output(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// Run the parsed command line and return the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let result = configure_threads().and_then(|_| dispatch(cli.command));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
