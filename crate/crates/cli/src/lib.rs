//! Verification pipeline and report rendering behind the `qslab` binary.

pub mod config;
pub mod fixtures;
pub mod output;
pub mod verify;

use std::path::{Path, PathBuf};

pub use config::{Check, Format, Layer, RunConfig};
pub use verify::{run, CheckRecord, VerificationReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qslab_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("fixture {path}: {msg}")]
    Fixture { path: PathBuf, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for usage problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if is_input_error(e) => 2,
            _ => 1,
        }
    }
}

fn is_input_error(e: &qslab_core::Error) -> bool {
    use qslab_core::Error::*;
    matches!(
        e,
        UnknownType(_)
            | NodeOutOfRange { .. }
            | WeightRank { .. }
            | NotDominant
            | Level
            | Precision(_)
            | AlcoveTooLarge { .. }
            | UnsupportedKr { .. }
            | GridRange { .. }
            | Settings(_)
            | Precondition(_)
            | ZeroPolynomial
    )
}
