//! Experiment harness around `deglab-core`: spec files, run reports, CSV,
//! JSON and SVG output, and corpus runs.

pub mod cli;
pub mod corpus;
pub mod emit;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod spec;

pub use corpus::{run_corpus, CorpusRun};
pub use error::CliError;
pub use pipeline::run;
pub use report::{RunReport, RunStatus};
pub use spec::{Budgets, ExperimentKind, ExperimentSpec, MapSource};
