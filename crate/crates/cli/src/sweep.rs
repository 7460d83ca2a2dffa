//! Figure sweeps: parameter scans written as CSV, one row per sweep point,
//! with quantum and classical outputs side by side, the max absolute error,
//! and the predicted crossover as a marker column.

use std::path::{Path, PathBuf};

use qsph_core::sph::{crossover_c, crossover_dx};

use crate::config::ExperimentConfig;
use crate::pipeline::{advection_params, classical_pair, quantum_cell, quantum_pair};
use crate::{fmt_f64, plot, HarnessError};

#[derive(Debug)]
pub struct SweepOutput {
    pub csv_path: PathBuf,
    pub plot_path: Option<PathBuf>,
    pub rows: usize,
    pub max_abs_error: f64,
}

fn open_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
        }
    }
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_record(
    writer: &mut csv::Writer<std::fs::File>,
    path: &Path,
    record: &[String],
) -> Result<(), HarnessError> {
    writer.write_record(record).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn per_ic_headers(n_ics: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(4 * n_ics);
    for i in 1..=n_ics {
        cols.push(format!("q_u0_ic{i}"));
        cols.push(format!("q_u1_ic{i}"));
        cols.push(format!("cl_u0_ic{i}"));
        cols.push(format!("cl_u1_ic{i}"));
    }
    cols
}

fn finish(
    mut writer: csv::Writer<std::fs::File>,
    csv_path: PathBuf,
    cfg: &ExperimentConfig,
    rows: usize,
    max_abs_error: f64,
) -> Result<SweepOutput, HarnessError> {
    writer.flush().map_err(|e| HarnessError::io(&csv_path, e))?;
    let plot_path = if cfg.emit_plots {
        let svg = csv_path.with_extension("svg");
        plot::emit_plot(&csv_path, &svg)?;
        Some(svg)
    } else {
        None
    };
    Ok(SweepOutput {
        csv_path,
        plot_path,
        rows,
        max_abs_error,
    })
}

/// Advection-speed sweep at fixed spacing, one timestep.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<SweepOutput, HarnessError> {
    cfg.validate()?;
    let csv_path = cfg.output_dir.join("fig5.csv");
    let mut writer = open_writer(&csv_path)?;

    let mut header = vec!["c".to_string()];
    header.extend(per_ic_headers(cfg.initial_conditions.len()));
    header.push("abs_error".into());
    header.push("crossover_c".into());
    write_record(&mut writer, &csv_path, &header)?;

    let marker = crossover_c(cfg.h, cfg.dx, cfg.dt);
    let mut rows = 0usize;
    let mut worst = 0.0f64;
    for c in cfg.c_range.log_points() {
        let params = advection_params(c, cfg.dt, cfg.h)?;
        let mut record = vec![fmt_f64(c)];
        let mut row_err = 0.0f64;
        for &(u0, u1) in &cfg.initial_conditions {
            let (q0, q1) = quantum_pair(u0, u1, cfg.dx, &params, cfg.timesteps)?;
            let (e0, e1) = classical_pair(u0, u1, cfg.dx, &params, cfg.timesteps)?;
            row_err = row_err.max((q0 - e0).abs()).max((q1 - e1).abs());
            record.extend([fmt_f64(q0), fmt_f64(q1), fmt_f64(e0), fmt_f64(e1)]);
        }
        record.push(fmt_f64(row_err));
        record.push(marker.map(fmt_f64).unwrap_or_default());
        write_record(&mut writer, &csv_path, &record)?;
        worst = worst.max(row_err);
        rows += 1;
    }
    finish(writer, csv_path, cfg, rows, worst)
}

/// Particle-spacing sweep, one block per fixed advection speed.
pub fn run_fig6(cfg: &ExperimentConfig) -> Result<SweepOutput, HarnessError> {
    cfg.validate()?;
    let csv_path = cfg.output_dir.join("fig6.csv");
    let mut writer = open_writer(&csv_path)?;

    let mut header = vec!["c".to_string(), "dx".to_string()];
    header.extend(per_ic_headers(cfg.initial_conditions.len()));
    header.push("abs_error".into());
    header.push("unstable".into());
    header.push("crossover_dx".into());
    write_record(&mut writer, &csv_path, &header)?;

    let mut rows = 0usize;
    let mut worst = 0.0f64;
    for &c in &cfg.c_rows {
        let params = advection_params(c, cfg.dt, cfg.h)?;
        let marker = crossover_dx(cfg.h, c, cfg.dt);
        for dx in cfg.dx_range.linear_points() {
            let mut record = vec![fmt_f64(c), fmt_f64(dx)];
            let mut row_err = 0.0f64;
            let mut negative = false;
            for &(u0, u1) in &cfg.initial_conditions {
                let (q0, q1) = quantum_pair(u0, u1, dx, &params, cfg.timesteps)?;
                let (e0, e1) = classical_pair(u0, u1, dx, &params, cfg.timesteps)?;
                row_err = row_err.max((q0 - e0).abs()).max((q1 - e1).abs());
                negative |= q0 < 0.0 || q1 < 0.0;
                record.extend([fmt_f64(q0), fmt_f64(q1), fmt_f64(e0), fmt_f64(e1)]);
            }
            record.push(fmt_f64(row_err));
            record.push(if negative { "1" } else { "0" }.into());
            record.push(marker.map(fmt_f64).unwrap_or_default());
            write_record(&mut writer, &csv_path, &record)?;
            worst = worst.max(row_err);
            rows += 1;
        }
    }
    finish(writer, csv_path, cfg, rows, worst)
}

/// Advection-speed sweep repeated for every circuit depth 1..=timesteps.
/// Rows also log the extraction success probability per initial condition,
/// a diagnostic of how much weight the junk terms absorb as depth grows.
pub fn run_fig7(cfg: &ExperimentConfig) -> Result<SweepOutput, HarnessError> {
    cfg.validate()?;
    let csv_path = cfg.output_dir.join("fig7.csv");
    let mut writer = open_writer(&csv_path)?;

    let mut header = vec!["timesteps".to_string(), "c".to_string()];
    header.extend(per_ic_headers(cfg.initial_conditions.len()));
    header.push("abs_error".into());
    for i in 1..=cfg.initial_conditions.len() {
        header.push(format!("success_prob_ic{i}"));
    }
    header.push("crossover_c".into());
    write_record(&mut writer, &csv_path, &header)?;

    let marker = crossover_c(cfg.h, cfg.dx, cfg.dt);
    let mut rows = 0usize;
    let mut worst = 0.0f64;
    for steps in 1..=cfg.timesteps {
        for c in cfg.c_range.log_points() {
            let params = advection_params(c, cfg.dt, cfg.h)?;
            let mut record = vec![steps.to_string(), fmt_f64(c)];
            let mut row_err = 0.0f64;
            let mut probs = Vec::with_capacity(cfg.initial_conditions.len());
            for &(u0, u1) in &cfg.initial_conditions {
                let (q0, q1, prob) = quantum_cell(u0, u1, cfg.dx, &params, steps)?;
                let (e0, e1) = classical_pair(u0, u1, cfg.dx, &params, steps)?;
                row_err = row_err.max((q0 - e0).abs()).max((q1 - e1).abs());
                record.extend([fmt_f64(q0), fmt_f64(q1), fmt_f64(e0), fmt_f64(e1)]);
                probs.push(prob);
            }
            record.push(fmt_f64(row_err));
            record.extend(probs.into_iter().map(fmt_f64));
            record.push(marker.map(fmt_f64).unwrap_or_default());
            write_record(&mut writer, &csv_path, &record)?;
            worst = worst.max(row_err);
            rows += 1;
        }
    }
    finish(writer, csv_path, cfg, rows, worst)
}
