//! Library-level checks of the experiment harness: CSV contents and schema
//! guarantees, determinism, the compare gate, and plot error handling.

use std::path::Path;

use qsph_cli::compare::{run_compare, run_compare_with_bias};
use qsph_cli::config::{Experiment, ExperimentConfig};
use qsph_cli::plot::emit_plot;
use qsph_cli::sweep::{run_fig5, run_fig6, run_fig7};
use qsph_cli::HarnessError;

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    (headers, rows)
}

fn col(headers: &[String], name: &str) -> usize {
    headers
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"))
}

fn f(row: &[String], idx: usize) -> f64 {
    row[idx].parse().unwrap()
}

#[test]
fn fig5_rows_conserve_sum_and_mark_crossover() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_fig5(&cfg).unwrap();
    assert_eq!(out.rows, 100);
    assert!(out.max_abs_error <= 1e-10);

    let (headers, rows) = read_rows(&out.csv_path);
    let marker = col(&headers, "crossover_c");
    let err_col = col(&headers, "abs_error");
    for row in &rows {
        // All default initial conditions sum to 1.
        for ic in 1..=4 {
            let q0 = f(row, col(&headers, &format!("q_u0_ic{ic}")));
            let q1 = f(row, col(&headers, &format!("q_u1_ic{ic}")));
            assert!((q0 + q1 - 1.0).abs() < 1e-10);
        }
        assert!(f(row, err_col) <= 1e-10);
        assert!((f(row, marker) - 1.44).abs() < 1e-12);
    }

    // Smallest speed: outputs within 5e-5 of the inputs.
    let first = &rows[0];
    assert!((f(first, 0) - 1e-4).abs() < 1e-12);
    let q0 = f(first, col(&headers, "q_u0_ic1"));
    let q1 = f(first, col(&headers, "q_u1_ic1"));
    assert!((q0 - 1.0).abs() < 5e-5);
    assert!(q1.abs() < 5e-5);
}

#[test]
fn fig6_identity_instability_and_crossover_columns() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig6);
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_fig6(&cfg).unwrap();
    let (headers, rows) = read_rows(&out.csv_path);

    let c_col = col(&headers, "c");
    let dx_col = col(&headers, "dx");
    let unstable_col = col(&headers, "unstable");
    let marker_col = col(&headers, "crossover_dx");
    let q0_ic1 = col(&headers, "q_u0_ic1");
    let q1_ic1 = col(&headers, "q_u1_ic1");

    let mut checked_identity = false;
    let mut checked_negative = false;
    for row in &rows {
        let c = f(row, c_col);
        let dx = f(row, dx_col);
        if dx >= 1.4 - 1e-9 {
            // At or beyond the smoothing length nothing moves.
            assert!((f(row, q0_ic1) - 0.2).abs() <= 1e-13, "dx = {dx}");
            assert!(f(row, q1_ic1).abs() <= 1e-13);
            checked_identity = true;
        }
        if (c - 2.0).abs() < 1e-12 && (dx - 1.2).abs() < 1e-9 {
            assert!(f(row, q0_ic1) < 0.0, "expected negative u0 at c=2, dx=1.2");
            assert_eq!(row[unstable_col], "1");
            checked_negative = true;
        }
        if (c - 2.0).abs() < 1e-12 {
            assert!((f(row, marker_col) - 0.49).abs() < 1e-12);
        }
        if (c - 0.5).abs() < 1e-12 {
            // h^2/(2c) = 1.96 lies outside the support: marker undefined.
            assert!(row[marker_col].is_empty());
        }
    }
    assert!(checked_identity && checked_negative);
}

#[test]
fn fig7_blocks_agree_with_frozen_values() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig7);
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_fig7(&cfg).unwrap();
    let (headers, rows) = read_rows(&out.csv_path);
    assert_eq!(out.rows, 300);

    let t_col = col(&headers, "timesteps");
    let c_col = col(&headers, "c");
    let q0_col = col(&headers, "q_u0_ic1");
    let q1_col = col(&headers, "q_u1_ic1");
    let err_col = col(&headers, "abs_error");
    let prob_col = col(&headers, "success_prob_ic1");

    let mut seen = [false; 3];
    let mut prev_prob_t2 = f64::INFINITY;
    for row in &rows {
        let t: usize = row[t_col].parse().unwrap();
        seen[t - 1] = true;
        let (q0, q1) = (f(row, q0_col), f(row, q1_col));
        assert!((q0 + q1 - 1.2).abs() < 1e-10);
        assert!(f(row, err_col) <= 1e-10);

        // The readable probability weight is a monotone non-increasing
        // diagnostic of the junk terms over the two-step sweep.
        let prob = f(row, prob_col);
        assert!((0.0..=1.0 + 1e-12).contains(&prob));
        if t == 2 {
            assert!(prob <= prev_prob_t2 + 1e-12, "success probability rose");
            prev_prob_t2 = prob;
        }

        // The sweep tops out at exactly c = 1.
        if (f(row, c_col) - 1.0).abs() < 1e-12 {
            match t {
                1 => {
                    assert!((q0 - 0.7444444444444445).abs() < 1e-9);
                    assert!((q1 - 0.45555555555555555).abs() < 1e-9);
                }
                2 => {
                    assert!((q0 - 0.704320987654321).abs() < 1e-9);
                    assert!((q1 - 0.4956790123456789).abs() < 1e-9);
                }
                _ => {}
            }
        }
    }
    assert_eq!(seen, [true; 3]);
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for (dir, _) in [(&dir_a, 0), (&dir_b, 1)] {
        let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
        cfg.c_range.points = 25;
        cfg.output_dir = dir.path().to_path_buf();
        cfg.emit_plots = true;
        run_fig5(&cfg).unwrap();
    }
    for name in ["fig5.csv", "fig5.svg"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn compare_passes_clean_and_fails_with_biased_coin() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Compare);
    cfg.c_range.points = 8;
    cfg.dx_range.points = 6;
    cfg.output_dir = dir.path().to_path_buf();

    let report = run_compare(&cfg).unwrap();
    assert!(report.within_tolerance());
    assert!(report.max_error[0] <= 1e-12, "T=1 should be at rounding level");
    assert!(report.csv_path.exists());

    let biased = run_compare_with_bias(&cfg, 0.01).unwrap();
    assert!(!biased.within_tolerance());
    assert!(!biased.worst_cell.is_empty());
}

#[test]
fn plot_renders_fig_csvs_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig5);
    cfg.c_range.points = 12;
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_fig5(&cfg).unwrap();

    let svg_path = dir.path().join("plot.svg");
    emit_plot(&out.csv_path, &svg_path).unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("<polyline"));
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.contains("advection speed c"));

    // Header-only CSV: error, and no file is written.
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "c,q_u0_ic1,q_u1_ic1,cl_u0_ic1,cl_u1_ic1,abs_error,crossover_c\n")
        .unwrap();
    let target = dir.path().join("empty.svg");
    match emit_plot(&empty, &target) {
        Err(HarnessError::EmptyData { .. }) => {}
        other => panic!("expected EmptyData, got {other:?}"),
    }
    assert!(!target.exists());

    // Corrupt numeric field: parse error carrying the line number.
    let broken = dir.path().join("broken.csv");
    std::fs::write(
        &broken,
        "c,q_u0_ic1,q_u1_ic1,cl_u0_ic1,cl_u1_ic1,abs_error,crossover_c\n\
         0.5,0.9,oops,0.9,0.1,0.0,1.44\n",
    )
    .unwrap();
    match emit_plot(&broken, &dir.path().join("broken.svg")) {
        Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected Parse error, got {other:?}"),
    }

    // Unknown schema.
    let alien = dir.path().join("alien.csv");
    std::fs::write(&alien, "x,y\n1,2\n").unwrap();
    assert!(matches!(
        emit_plot(&alien, &dir.path().join("alien.svg")),
        Err(HarnessError::Parse { .. })
    ));
}

#[test]
fn fig7_plot_has_one_block_per_depth() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig7);
    cfg.c_range.points = 10;
    cfg.output_dir = dir.path().to_path_buf();
    let out = run_fig7(&cfg).unwrap();
    let svg_path = dir.path().join("fig7.svg");
    emit_plot(&out.csv_path, &svg_path).unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    for t in 1..=3 {
        assert!(svg.contains(&format!("t = {t}:")), "missing panel block for t = {t}");
    }
}
