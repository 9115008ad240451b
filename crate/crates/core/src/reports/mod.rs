//! Reports behind the command-line interface: configuration, the exact
//! verification suites, flow and cohomology runs, and their artifacts.

pub mod algebra;
pub mod config;
pub mod runs;

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::gauge::GaugeError;
use crate::lattice::LatticeError;

pub use algebra::{verify_algebra, Check, Group, Mutation, SuiteReport, KNOWN_CONFLICTS};
pub use config::RunConfig;
pub use runs::*;

/// Process exit status of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Exit::Pass
        } else {
            Exit::Fail
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

impl From<LatticeError> for ReportError {
    fn from(e: LatticeError) -> Self {
        ReportError::Gauge(GaugeError::Lattice(e))
    }
}

impl ReportError {
    /// Configuration, usage, size-cap and output errors are usage errors;
    /// numerical failures are check failures.
    pub fn exit(&self) -> Exit {
        match self {
            ReportError::Gauge(GaugeError::Lattice(LatticeError::SizeCap { .. } | LatticeError::GridSize(_))) => Exit::Usage,
            ReportError::Gauge(_) => Exit::Fail,
            _ => Exit::Usage,
        }
    }
}

/// Pretty JSON with a trailing newline; identical inputs give identical bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name`, creating `dir`.
pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, ReportError> {
    std::fs::create_dir_all(dir).map_err(|e| ReportError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| ReportError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}
