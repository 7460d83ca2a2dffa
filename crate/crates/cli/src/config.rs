//! Experiment configuration: per-experiment defaults, overridable from a
//! flat `key = value` file and a handful of CLI flags.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`, got `{text}`")]
    Syntax {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey {
        path: PathBuf,
        line: usize,
        key: String,
    },
    #[error("{path}:{line}: invalid value for `{key}`: {reason}")]
    BadValue {
        path: PathBuf,
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig5,
    Fig6,
    Fig7,
    Compare,
    Invariants,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Experiment::Fig5 => "fig5",
            Experiment::Fig6 => "fig6",
            Experiment::Fig7 => "fig7",
            Experiment::Compare => "compare",
            Experiment::Invariants => "invariants",
        };
        f.write_str(name)
    }
}

/// Inclusive sweep bounds with a fixed point count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SweepRange {
    pub fn new(min: f64, max: f64, points: usize) -> SweepRange {
        SweepRange { min, max, points }
    }

    pub fn log_points(&self) -> Vec<f64> {
        let (a, b) = (self.min.ln(), self.max.ln());
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / (self.points - 1) as f64).exp())
            .collect()
    }

    pub fn linear_points(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| {
                self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        let ordered = self.min.is_finite()
            && self.max.is_finite()
            && self.min > 0.0
            && self.max > self.min;
        if !ordered {
            return Err(ConfigError::Invalid(format!(
                "{name} bounds must satisfy 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(ConfigError::Invalid(format!(
                "{name} needs at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }
}

/// Everything one experiment run needs. Constructed from per-experiment
/// defaults, then overlaid by a config file and CLI flags, in that order.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Log-spaced advection-speed sweep (fig5, fig7, compare).
    pub c_range: SweepRange,
    /// Linear particle-spacing sweep (fig6).
    pub dx_range: SweepRange,
    /// Fixed particle spacing for speed sweeps.
    pub dx: f64,
    /// Fixed advection speeds, one sweep block each (fig6).
    pub c_rows: Vec<f64>,
    pub h: f64,
    pub dt: f64,
    pub initial_conditions: Vec<(f64, f64)>,
    /// Deepest circuit to run; fig7 emits one block per depth 1..=timesteps.
    pub timesteps: usize,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    pub seed: u64,
    pub tolerance: f64,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> ExperimentConfig {
        let base = ExperimentConfig {
            experiment,
            c_range: SweepRange::new(1e-4, 2.0, 100),
            dx_range: SweepRange::new(0.05, 1.6, 32),
            dx: 0.5,
            c_rows: vec![0.5, 1.0, 2.0],
            h: 1.2,
            dt: 1.0,
            initial_conditions: vec![(1.0, 0.0), (0.8, 0.2), (0.6, 0.4), (0.5, 0.5)],
            timesteps: 1,
            output_dir: PathBuf::from("out"),
            emit_plots: false,
            seed: 7,
            tolerance: 1e-10,
        };
        match experiment {
            Experiment::Fig5 => base,
            Experiment::Fig6 => ExperimentConfig {
                h: 1.4,
                initial_conditions: vec![(0.2, 0.0), (0.0, 0.2), (0.5, 0.5), (0.8, 0.4)],
                ..base
            },
            Experiment::Fig7 => ExperimentConfig {
                c_range: SweepRange::new(1e-4, 1.0, 100),
                dx: 0.2,
                initial_conditions: vec![(0.8, 0.4)],
                timesteps: 3,
                ..base
            },
            Experiment::Compare => ExperimentConfig {
                c_range: SweepRange::new(1e-4, 2.0, 20),
                timesteps: 3,
                initial_conditions: vec![
                    (1.0, 0.0),
                    (0.8, 0.2),
                    (0.6, 0.4),
                    (0.5, 0.5),
                    (0.8, 0.4),
                    (0.2, 0.0),
                    (0.0, 0.2),
                ],
                ..base
            },
            Experiment::Invariants => base,
        }
    }

    /// Overlay values from a flat `key = value` file. Unknown keys and
    /// malformed values are hard errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.to_path_buf(),
                line: line_no,
                text: line.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |reason: String| ConfigError::BadValue {
                path: path.to_path_buf(),
                line: line_no,
                key: key.to_string(),
                reason,
            };
            let parse_f64 =
                |value: &str| value.parse::<f64>().map_err(|e| bad(e.to_string()));
            match key {
                "c_min" => self.c_range.min = parse_f64(value)?,
                "c_max" => self.c_range.max = parse_f64(value)?,
                "c_points" => {
                    self.c_range.points =
                        value.parse::<usize>().map_err(|e| bad(e.to_string()))?
                }
                "dx_min" => self.dx_range.min = parse_f64(value)?,
                "dx_max" => self.dx_range.max = parse_f64(value)?,
                "dx_points" => {
                    self.dx_range.points =
                        value.parse::<usize>().map_err(|e| bad(e.to_string()))?
                }
                "dx" => self.dx = parse_f64(value)?,
                "c_rows" => {
                    self.c_rows = value
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| bad(e.to_string()))?
                }
                "h" => self.h = parse_f64(value)?,
                "dt" => self.dt = parse_f64(value)?,
                "initial_conditions" => {
                    self.initial_conditions = parse_initial_conditions(value)
                        .map_err(bad)?
                }
                "timesteps" => {
                    self.timesteps = value.parse::<usize>().map_err(|e| bad(e.to_string()))?
                }
                "output_dir" => self.output_dir = PathBuf::from(value),
                "emit_plots" => {
                    self.emit_plots = value.parse::<bool>().map_err(|e| bad(e.to_string()))?
                }
                "seed" => self.seed = value.parse::<u64>().map_err(|e| bad(e.to_string()))?,
                "tol" => self.tolerance = parse_f64(value)?,
                other => {
                    return Err(ConfigError::UnknownKey {
                        path: path.to_path_buf(),
                        line: line_no,
                        key: other.to_string(),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.c_range.validate("c_range")?;
        self.dx_range.validate("dx_range")?;
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.dx) {
            return Err(ConfigError::Invalid(format!(
                "dx must be positive, got {}",
                self.dx
            )));
        }
        if !positive(self.h) {
            return Err(ConfigError::Invalid(format!(
                "h must be positive, got {}",
                self.h
            )));
        }
        if !positive(self.dt) {
            return Err(ConfigError::Invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.c_rows.is_empty() || !self.c_rows.iter().all(|&c| positive(c)) {
            return Err(ConfigError::Invalid(
                "c_rows must be a nonempty list of positive speeds".into(),
            ));
        }
        if self.initial_conditions.is_empty() {
            return Err(ConfigError::Invalid("no initial conditions".into()));
        }
        for &(u0, u1) in &self.initial_conditions {
            if u0 == 0.0 && u1 == 0.0 {
                return Err(ConfigError::Invalid(
                    "initial condition (0, 0) cannot be amplitude-encoded".into(),
                ));
            }
        }
        if !(1..=3).contains(&self.timesteps) {
            return Err(ConfigError::Invalid(format!(
                "timesteps must be 1..=3, got {}",
                self.timesteps
            )));
        }
        if !positive(self.tolerance) {
            return Err(ConfigError::Invalid(format!(
                "tol must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Parse `u0,u1; u0,u1; ...` into value pairs.
fn parse_initial_conditions(value: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for chunk in value.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (a, b) = chunk
            .split_once(',')
            .ok_or_else(|| format!("expected `u0,u1`, got `{chunk}`"))?;
        let u0 = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
        let u1 = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
        out.push((u0, u1));
    }
    if out.is_empty() {
        return Err("no pairs found".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_differ_per_experiment() {
        let fig5 = ExperimentConfig::defaults(Experiment::Fig5);
        assert_eq!(fig5.dx, 0.5);
        assert_eq!(fig5.h, 1.2);
        assert_eq!(fig5.timesteps, 1);
        assert_eq!(fig5.initial_conditions.len(), 4);

        let fig6 = ExperimentConfig::defaults(Experiment::Fig6);
        assert_eq!(fig6.h, 1.4);
        assert_eq!(fig6.c_rows, vec![0.5, 1.0, 2.0]);
        assert_eq!(fig6.initial_conditions[0], (0.2, 0.0));

        let fig7 = ExperimentConfig::defaults(Experiment::Fig7);
        assert_eq!(fig7.dx, 0.2);
        assert_eq!(fig7.timesteps, 3);
        assert_eq!(fig7.initial_conditions, vec![(0.8, 0.4)]);
        assert_eq!(fig7.c_range.max, 1.0);

        for exp in [
            Experiment::Fig5,
            Experiment::Fig6,
            Experiment::Fig7,
            Experiment::Compare,
            Experiment::Invariants,
        ] {
            ExperimentConfig::defaults(exp).validate().unwrap();
        }
    }

    #[test]
    fn file_overlay_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# comment line").unwrap();
        writeln!(f, "c_min = 0.001").unwrap();
        writeln!(f, "c_points = 12").unwrap();
        writeln!(f, "initial_conditions = 0.9,0.1; 0.3,0.3").unwrap();
        writeln!(f, "emit_plots = true").unwrap();
        writeln!(f, "c_rows = 1.0, 2.0").unwrap();
        drop(f);

        let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.c_range.min, 0.001);
        assert_eq!(cfg.c_range.points, 12);
        assert_eq!(cfg.initial_conditions, vec![(0.9, 0.1), (0.3, 0.3)]);
        assert!(cfg.emit_plots);
        assert_eq!(cfg.c_rows, vec![1.0, 2.0]);
        cfg.validate().unwrap();

        let bad = dir.path().join("bad.cfg");
        std::fs::write(&bad, "nonsense line\n").unwrap();
        let err = cfg.apply_file(&bad).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));

        std::fs::write(&bad, "mystery_key = 3\n").unwrap();
        let err = cfg.apply_file(&bad).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }));

        std::fs::write(&bad, "h = tall\n").unwrap();
        let err = cfg.apply_file(&bad).unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { .. }));
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
        cfg.c_range.points = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
        cfg.initial_conditions = vec![(0.0, 0.0)];
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
        cfg.timesteps = 4;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults(Experiment::Fig6);
        cfg.dx_range.min = -0.1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sweep_points_are_deterministic_and_bounded() {
        let range = SweepRange::new(1e-4, 2.0, 20);
        let pts = range.log_points();
        assert_eq!(pts.len(), 20);
        assert!((pts[0] - 1e-4).abs() < 1e-18);
        assert!((pts[19] - 2.0).abs() < 1e-12);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts, range.log_points());

        let lin = SweepRange::new(0.05, 1.6, 32).linear_points();
        assert_eq!(lin.len(), 32);
        assert!((lin[31] - 1.6).abs() < 1e-12);
    }
}
