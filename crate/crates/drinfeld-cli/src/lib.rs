//! Command-line frontend for the exact Drinfeld-module calculator: curve-spec
//! ingestion, JSON/pretty serialization, the small expression language for
//! coefficient-ring elements, the subcommand implementations, and the
//! randomized property suites behind `verify`.

pub mod aexpr;
pub mod checks;
pub mod commands;
pub mod json;
pub mod props;
pub mod render;
pub mod session;

use std::fmt;

/// A command failure, classified by the exit code it should produce:
/// usage problems (bad flags, malformed expressions or spec files,
/// out-of-range parameters) exit with 2, while failed mathematical checks
/// and unsupported inputs exit with 1.
#[derive(Debug, Clone)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) => m,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<drinfeld_core::Error> for Failure {
    fn from(e: drinfeld_core::Error) -> Failure {
        match e {
            // Parameters outside the supported ranges are caller mistakes.
            drinfeld_core::Error::RangeUnsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;
