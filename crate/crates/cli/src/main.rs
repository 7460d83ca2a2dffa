use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsph_cli::compare::{print_report, print_sweep_summary, run_compare};
use qsph_cli::config::{Experiment, ExperimentConfig};
use qsph_cli::invariants;
use qsph_cli::sweep;
use qsph_cli::HarnessError;

/// Two-particle quantum-walk advection experiments.
///
/// Exit codes: 0 on success, 1 when a comparison or invariant check breaches
/// its tolerance, 2 on usage, configuration, or I/O errors.
#[derive(Parser)]
#[command(name = "qsph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advection-speed sweep at fixed spacing (CSV, optional SVG)
    Fig5(CommonArgs),
    /// Particle-spacing sweep at fixed speeds (CSV, optional SVG)
    Fig6(CommonArgs),
    /// Speed sweep over one, two and three timesteps (CSV, optional SVG)
    Fig7(CommonArgs),
    /// Quantum-vs-classical comparison over the verification grid
    Compare(CommonArgs),
    /// Randomized and fixed invariant suites
    Invariants(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat `key = value` config file overriding the experiment defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV/SVG artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render SVG plots next to the CSVs
    #[arg(long)]
    plots: bool,
    /// Seed for the randomized suites
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance for comparison checks
    #[arg(long)]
    tol: Option<f64>,
}

impl CommonArgs {
    fn into_config(self, experiment: Experiment) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = ExperimentConfig::defaults(experiment);
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(out) = self.out {
            cfg.output_dir = out;
        }
        if self.plots {
            cfg.emit_plots = true;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(tol) = self.tol {
            cfg.tolerance = tol;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every checked tolerance held.
fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Fig5(args) => {
            let cfg = args.into_config(Experiment::Fig5)?;
            let out = sweep::run_fig5(&cfg)?;
            print_sweep_summary("fig5", &out);
            Ok(true)
        }
        Command::Fig6(args) => {
            let cfg = args.into_config(Experiment::Fig6)?;
            let out = sweep::run_fig6(&cfg)?;
            print_sweep_summary("fig6", &out);
            Ok(true)
        }
        Command::Fig7(args) => {
            let cfg = args.into_config(Experiment::Fig7)?;
            let out = sweep::run_fig7(&cfg)?;
            print_sweep_summary("fig7", &out);
            Ok(true)
        }
        Command::Compare(args) => {
            let cfg = args.into_config(Experiment::Compare)?;
            let report = run_compare(&cfg)?;
            print_report(&report, cfg.timesteps);
            Ok(report.within_tolerance())
        }
        Command::Invariants(args) => {
            let cfg = args.into_config(Experiment::Invariants)?;
            let results = invariants::run_all(&cfg)?;
            let mut all_passed = true;
            for check in &results {
                let status = if check.passed { "ok  " } else { "FAIL" };
                println!("{status} {} — {}", check.name, check.detail);
                all_passed &= check.passed;
            }
            println!(
                "invariants: {}/{} checks passed",
                results.iter().filter(|c| c.passed).count(),
                results.len()
            );
            Ok(all_passed)
        }
    }
}
