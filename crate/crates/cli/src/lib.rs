//! Command-line front end for the partitioning toolkit: model generation,
//! solving, certification, exhaustive oracle runs, the two-setting
//! reference experiment, and parameter sweeps.

pub mod args;
pub mod commands;
pub mod experiment;
pub mod sweep;

use std::path::{Path, PathBuf};

/// Errors at the CLI boundary, mapped to process exit codes:
/// 2 usage (handled by the argument parser), 3 data, 4 numerical.
#[derive(Debug)]
pub enum CliError {
    Core(hpm_core::Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hpm_core::Error> for CliError {
    fn from(e: hpm_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use hpm_core::Error::*;
        match self {
            CliError::Io(..) => 3,
            CliError::Core(e) => match e {
                NonFinite { .. } | SingularSystem | ResidualTooLarge { .. } | Overflow(_) => 4,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn write_string(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Parse a whitespace-separated ±1 labeling.
pub fn parse_labels(text: &str) -> CliResult<hpm_core::Assignment> {
    let mut labels = Vec::new();
    for tok in text.split_whitespace() {
        let l: i64 = tok.parse().map_err(|_| hpm_core::Error::Parse {
            line: 1,
            message: format!("bad label `{tok}`"),
        })?;
        match l {
            1 => labels.push(1i8),
            -1 => labels.push(-1i8),
            other => {
                return Err(hpm_core::Error::InvalidAssignment(format!(
                    "labels must be +1 or -1, found {other}"
                ))
                .into())
            }
        }
    }
    Ok(hpm_core::Assignment::new(labels)?)
}
