//! Quantum-vs-classical comparison over the full verification grid:
//! per-depth max errors to stdout, every cell to CSV, nonzero exit when any
//! error exceeds the tolerance.

use std::path::PathBuf;

use crate::config::ExperimentConfig;
use crate::pipeline::{advection_params, classical_pair, quantum_pair_biased};
use crate::sweep::SweepOutput;
use crate::{fmt_f64, HarnessError};

#[derive(Debug)]
pub struct CompareReport {
    pub csv_path: PathBuf,
    /// Max |quantum - classical| per depth 1..=3.
    pub max_error: [f64; 3],
    /// Parameters of the worst cell, for the breach message.
    pub worst_cell: String,
    pub tolerance: f64,
}

impl CompareReport {
    pub fn within_tolerance(&self) -> bool {
        self.max_error.iter().all(|&e| e <= self.tolerance)
    }
}

pub fn run_compare(cfg: &ExperimentConfig) -> Result<CompareReport, HarnessError> {
    run_compare_with_bias(cfg, 0.0)
}

/// The comparison grid with the coin weight shifted by `alpha_bias`;
/// a nonzero bias is the negative control that must breach the tolerance.
pub fn run_compare_with_bias(
    cfg: &ExperimentConfig,
    alpha_bias: f64,
) -> Result<CompareReport, HarnessError> {
    cfg.validate()?;
    let csv_path = cfg.output_dir.join("compare.csv");
    if let Some(parent) = csv_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
        }
    }
    let file = std::fs::File::create(&csv_path).map_err(|e| HarnessError::io(&csv_path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record([
            "timesteps",
            "u0",
            "u1",
            "c",
            "dx",
            "h",
            "q_u0",
            "q_u1",
            "cl_u0",
            "cl_u1",
            "abs_error",
        ])
        .map_err(|source| HarnessError::Csv {
            path: csv_path.clone(),
            source,
        })?;

    let mut max_error = [0.0f64; 3];
    let mut worst = (0.0f64, String::new());

    // Depth 1 runs the full geometry grid; deeper circuits use the
    // multi-step sweep parameters with the speed range capped at 1.
    let single_step_geometry: Vec<(f64, f64)> = {
        let mut g = vec![(0.5, 1.2), (0.2, 1.2)];
        g.extend(cfg.dx_range.linear_points().into_iter().map(|dx| (dx, 1.4)));
        g
    };
    let mut multi_range = cfg.c_range;
    multi_range.max = multi_range.max.min(1.0);

    for steps in 1..=cfg.timesteps {
        let (speeds, geometry) = if steps == 1 {
            (cfg.c_range.log_points(), single_step_geometry.clone())
        } else {
            (multi_range.log_points(), vec![(0.2, 1.2)])
        };
        for c in speeds {
            for &(dx, h) in &geometry {
                let params = advection_params(c, cfg.dt, h)?;
                for &(u0, u1) in &cfg.initial_conditions {
                    let (q0, q1) = quantum_pair_biased(u0, u1, dx, &params, steps, alpha_bias)?;
                    let (e0, e1) = classical_pair(u0, u1, dx, &params, steps)?;
                    let err = (q0 - e0).abs().max((q1 - e1).abs());
                    max_error[steps - 1] = max_error[steps - 1].max(err);
                    if err > worst.0 {
                        worst = (
                            err,
                            format!("T={steps} u=({u0},{u1}) c={c:.6e} dx={dx} h={h}"),
                        );
                    }
                    writer
                        .write_record([
                            steps.to_string(),
                            fmt_f64(u0),
                            fmt_f64(u1),
                            fmt_f64(c),
                            fmt_f64(dx),
                            fmt_f64(h),
                            fmt_f64(q0),
                            fmt_f64(q1),
                            fmt_f64(e0),
                            fmt_f64(e1),
                            fmt_f64(err),
                        ])
                        .map_err(|source| HarnessError::Csv {
                            path: csv_path.clone(),
                            source,
                        })?;
                }
            }
        }
    }
    writer.flush().map_err(|e| HarnessError::io(&csv_path, e))?;

    Ok(CompareReport {
        csv_path,
        max_error,
        worst_cell: worst.1,
        tolerance: cfg.tolerance,
    })
}

/// Summary of `SweepOutput`-style runs; used by the binary for uniform logs.
pub fn print_sweep_summary(name: &str, out: &SweepOutput) {
    println!(
        "{name}: {} rows -> {} (max |quantum - classical| = {:.3e})",
        out.rows,
        out.csv_path.display(),
        out.max_abs_error
    );
    if let Some(plot) = &out.plot_path {
        println!("{name}: plot -> {}", plot.display());
    }
}

pub fn print_report(report: &CompareReport, timesteps: usize) {
    for (i, err) in report.max_error.iter().enumerate().take(timesteps) {
        println!("compare T={}: max |quantum - classical| = {err:.3e}", i + 1);
    }
    println!("compare: grid written to {}", report.csv_path.display());
    if report.within_tolerance() {
        println!("compare: PASS (tolerance {:.0e})", report.tolerance);
    } else {
        println!(
            "compare: FAIL (tolerance {:.0e}, worst cell {})",
            report.tolerance, report.worst_cell
        );
    }
}
