use thiserror::Error;

use deglab_core::algebra::AlgebraError;
use deglab_core::gcd_height::GcdHeightError;
use deglab_core::heights::HeightError;
use deglab_core::maps::MapError;
use deglab_core::modp::ModPError;
use deglab_core::monomial::MonomialError;
use deglab_core::point::PointError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BUDGET_PARTIAL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("syntax error in map: {0}")]
    Syntax(String),
    #[error("{context}: {message}")]
    Module { context: &'static str, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Output(String),
}

impl CliError {
    /// Short class name recorded in corpus reports.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Spec(_) => "SpecError",
            CliError::Syntax(_) => "SyntaxError",
            CliError::Module { .. } => "ModuleError",
            CliError::Io { .. } => "IoError",
            CliError::Output(_) => "OutputError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => EXIT_FAILURE,
            _ => EXIT_INPUT,
        }
    }
}

fn is_syntax(e: &MapError) -> bool {
    match e {
        MapError::Algebra(AlgebraError::Syntax { .. }) => true,
        MapError::Coordinate { source, .. } => matches!(source, AlgebraError::Syntax { .. }),
        MapError::Document(_) => true,
        _ => false,
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        if is_syntax(&e) {
            CliError::Syntax(e.to_string())
        } else {
            CliError::Module {
                context: "map",
                message: e.to_string(),
            }
        }
    }
}

macro_rules! module_error {
    ($t:ty, $ctx:literal) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Module {
                    context: $ctx,
                    message: e.to_string(),
                }
            }
        }
    };
}

module_error!(HeightError, "heights");
module_error!(ModPError, "mod p");
module_error!(GcdHeightError, "gcd height");
module_error!(MonomialError, "monomial");
module_error!(AlgebraError, "algebra");

impl From<PointError> for CliError {
    fn from(e: PointError) -> Self {
        CliError::Spec(e.to_string())
    }
}
