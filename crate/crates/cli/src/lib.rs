//! Experiment harness around `qsph-core`: figure sweeps written as CSV,
//! optional SVG plots, a quantum-vs-classical comparison report, and the
//! invariant checks as runnable suites.

use std::path::PathBuf;

use thiserror::Error;

pub mod compare;
pub mod config;
pub mod invariants;
pub mod pipeline;
pub mod plot;
pub mod sweep;

use config::ConfigError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("no data rows in {path}")]
    EmptyData { path: PathBuf },
    #[error(transparent)]
    Circuit(#[from] qsph_core::CircuitError),
    #[error(transparent)]
    Sph(#[from] qsph_core::SphError),
    #[error(transparent)]
    StateVector(#[from] qsph_core::StateVectorError),
}

impl HarnessError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> HarnessError {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Full double precision, fixed format; keeps regression diffs meaningful
/// and reruns byte-identical.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
