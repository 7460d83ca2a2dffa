//! End-to-end checks of the `qsph` binary: exit codes and artifacts.

use std::path::Path;
use std::process::Command;

fn qsph() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsph"))
}

#[test]
fn fig5_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let status = qsph()
        .args(["fig5", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("fig5.csv").exists());
    assert!(!dir.path().join("fig5.svg").exists(), "no plot without --plots");
}

#[test]
fn plots_flag_adds_svg() {
    let dir = tempfile::tempdir().unwrap();
    let status = qsph()
        .args(["fig6", "--plots", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("fig6.svg").exists());
}

#[test]
fn compare_exit_codes_follow_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let ok = qsph()
        .args(["compare", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(stdout.contains("compare: PASS"));
    assert!(dir.path().join("compare.csv").exists());

    // An impossible tolerance turns the same run into a breach.
    let breach = qsph()
        .args(["compare", "--tol", "1e-18", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(breach.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&breach.stdout).contains("compare: FAIL"));
}

#[test]
fn invariants_run_green() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsph()
        .args(["invariants", "--seed", "123", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("9/9 checks passed"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let status = qsph().arg("not-a-command").status().unwrap();
    assert_eq!(status.code(), Some(2));

    let status = qsph()
        .args(["fig5", "--config", "/definitely/not/here.cfg"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Config contradiction (invalid sweep) also maps to 2.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "c_points = 1\n").unwrap();
    let status = qsph()
        .args(["fig5", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn config_file_steers_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("small.cfg");
    std::fs::write(
        &cfg_path,
        "c_points = 5\ninitial_conditions = 0.9,0.3\n",
    )
    .unwrap();
    let status = qsph()
        .args(["fig5", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let text = std::fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header plus five sweep rows");
    assert!(lines[0].starts_with("c,q_u0_ic1,q_u1_ic1,cl_u0_ic1,cl_u1_ic1,abs_error"));
}

#[test]
fn rerun_is_byte_identical(){
    fn run_once(dir: &Path) -> Vec<u8> {
        let status = qsph().args(["fig7", "--out"]).arg(dir).status().unwrap();
        assert_eq!(status.code(), Some(0));
        std::fs::read(dir.join("fig7.csv")).unwrap()
    }
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    assert_eq!(run_once(dir_a.path()), run_once(dir_b.path()));
}
