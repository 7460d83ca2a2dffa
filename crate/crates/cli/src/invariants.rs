//! The library's invariants re-run as a runtime suite: seeded randomized
//! sweeps plus the fixed matrix cross-checks, one result line per check.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use qsph_core::circuit::QsphCircuit;
use qsph_core::encoding::{
    alpha_amplitudes, build_kernel_state, coin_operator_2q, coin_operator_3q,
    in_support_neighbors, inner_product_update, CoinParams,
};
use qsph_core::sph::{
    cfl_max_c, classical_step, crossover_c, crossover_dx, ParticleLine,
};
use qsph_core::statevector::{two_particle_shift, zero_state, Operator, StateVector};

use crate::config::ExperimentConfig;
use crate::pipeline::{advection_params, classical_pair, quantum_pair};
use crate::HarnessError;

#[derive(Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn bounded(name: &'static str, worst: f64, tol: f64) -> CheckResult {
        CheckResult {
            name,
            passed: worst <= tol,
            detail: format!("max deviation {worst:.3e}, tolerance {tol:.0e}"),
        }
    }
}

pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<CheckResult>, HarnessError> {
    cfg.validate()?;
    Ok(vec![
        encoding_equivalence(cfg)?,
        kernel_state_normalization(cfg)?,
        coin_unitarity(),
        circuit_norm_preservation(cfg)?,
        sum_conservation(cfg)?,
        crossover_identity(cfg)?,
        compact_support_identity(cfg)?,
        instability_onset(cfg)?,
        embedding_cross_check(),
    ])
}

/// Inner-product and alpha reconstructions vs the classical step over
/// random many-particle lines.
fn encoding_equivalence(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.random_range(2..=16usize);
        let dx = rng.random_range(0.05..1.2);
        let h = rng.random_range(0.2..2.0);
        let c = rng.random_range(0.0..cfl_max_c(dx, 1.0));
        let u: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
        let line = ParticleLine::uniform(0.0, dx, u)?;
        let params = advection_params(c, 1.0, h)?;
        let stepped = classical_step(&line, &params);
        for j in 0..m {
            let neighbors: Vec<usize> = (0..m).filter(|&k| k != j).collect();
            let inner = inner_product_update(&line, j, &neighbors, &params)
                .expect("valid neighbor list");
            let alpha = alpha_amplitudes(&line, j, &neighbors, &params)
                .expect("valid neighbor list")
                .reconstruct(line.u(), j);
            worst = worst
                .max((inner - stepped.u()[j]).abs())
                .max((alpha - stepped.u()[j]).abs());
        }
    }
    Ok(CheckResult::bounded("encoding-equivalence", worst, 1e-10))
}

/// Every kernel-state component must have squared modulus 1/N and the whole
/// vector unit norm.
fn kernel_state_normalization(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6b65726e);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.random_range(2..=12usize);
        let dx = rng.random_range(0.05..0.9);
        let h = rng.random_range(0.2..2.0);
        let u: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
        let line = ParticleLine::uniform(0.0, dx, u)?;
        let kernel = advection_params(0.0, 1.0, h)?.kernel;
        let j = rng.random_range(0..m);
        let neighbors = in_support_neighbors(&line, j, &kernel);
        if neighbors.is_empty() {
            continue;
        }
        let state = build_kernel_state(&line, j, &neighbors, &kernel).expect("in-support list");
        let n = state.n_neighbors() as f64;
        let mut norm_sqr = 0.0;
        for w in state.components() {
            worst = worst.max((w.norm_sqr() - 1.0 / n).abs());
            norm_sqr += w.norm_sqr();
        }
        worst = worst.max((norm_sqr.sqrt() - 1.0).abs());
    }
    Ok(CheckResult::bounded("kernel-state-normalization", worst, 1e-12))
}

/// Both coin constructions stay unitary across the full weight range.
fn coin_unitarity() -> CheckResult {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let alpha = -2.0 + 4.0 * i as f64 / 999.0;
        let cp = CoinParams::from_alpha00(alpha);
        worst = worst
            .max(coin_operator_2q(&cp).unitarity_deviation())
            .max(coin_operator_3q(&cp).unitarity_deviation());
    }
    CheckResult::bounded("coin-unitarity", worst, 1e-12)
}

/// State norm stays 1 after every gate of every circuit in a speed sweep.
fn circuit_norm_preservation(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut worst = 0.0f64;
    for c in [1e-4, 0.5, 1.0, 2.0] {
        let params = advection_params(c, cfg.dt, cfg.h)?;
        for steps in 1..=3 {
            let circuit = QsphCircuit::build(0.8, 0.4, cfg.dx, &params, steps)?;
            let mut state = zero_state(circuit.n_qubits())?;
            for (gate, targets) in circuit.gates() {
                state = state.apply(gate, targets)?;
                worst = worst.max((state.norm() - 1.0).abs());
            }
        }
    }
    Ok(CheckResult::bounded("circuit-norm-preservation", worst, 1e-12))
}

/// Extracted solutions conserve the initial sum.
fn sum_conservation(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut worst = 0.0f64;
    for &(u0, u1) in &cfg.initial_conditions {
        for c in [1e-3, 0.7, 1.44, 2.0] {
            let params = advection_params(c, cfg.dt, cfg.h)?;
            for steps in 1..=3 {
                let (q0, q1) = quantum_pair(u0, u1, cfg.dx, &params, steps)?;
                worst = worst.max((q0 + q1 - (u0 + u1)).abs());
            }
        }
    }
    Ok(CheckResult::bounded("sum-conservation", worst, 1e-10))
}

/// At the predicted crossover both solutions sit at the initial mean.
fn crossover_identity(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut worst = 0.0f64;
    if let Some(c_star) = crossover_c(1.2, 0.5, cfg.dt) {
        let params = advection_params(c_star, cfg.dt, 1.2)?;
        for &(u0, u1) in &cfg.initial_conditions {
            let (q0, q1) = quantum_pair(u0, u1, 0.5, &params, 1)?;
            let mean = (u0 + u1) / 2.0;
            worst = worst.max((q0 - q1).abs()).max((q0 - mean).abs());
        }
    }
    if let Some(dx_star) = crossover_dx(1.4, 2.0, cfg.dt) {
        let params = advection_params(2.0, cfg.dt, 1.4)?;
        for &(u0, u1) in &cfg.initial_conditions {
            let (q0, q1) = quantum_pair(u0, u1, dx_star, &params, 1)?;
            let mean = (u0 + u1) / 2.0;
            worst = worst.max((q0 - q1).abs()).max((q0 - mean).abs());
        }
    }
    Ok(CheckResult::bounded("crossover-identity", worst, 1e-9))
}

/// Spacing at or past the smoothing length leaves every value unchanged.
fn compact_support_identity(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let mut worst = 0.0f64;
    for (dx, h) in [(1.2, 1.2), (1.5, 1.2), (1.4, 1.4), (2.0, 1.4)] {
        let params = advection_params(1.7, cfg.dt, h)?;
        let line = ParticleLine::uniform(0.0, dx, vec![0.8, 0.4])?;
        let stepped = classical_step(&line, &params);
        if stepped.u() != line.u() {
            return Ok(CheckResult {
                name: "compact-support-identity",
                passed: false,
                detail: format!("classical path not bitwise identical at dx={dx}, h={h}"),
            });
        }
        for steps in 1..=3 {
            let (q0, q1) = quantum_pair(0.8, 0.4, dx, &params, steps)?;
            worst = worst.max((q0 - 0.8).abs()).max((q1 - 0.4).abs());
        }
    }
    Ok(CheckResult::bounded("compact-support-identity", worst, 1e-13))
}

/// The sign flip of u0 for c=2, h=1.4, u=(0.2, 0) is confined to the open
/// spacing interval (0.98, 1.4).
fn instability_onset(cfg: &ExperimentConfig) -> Result<CheckResult, HarnessError> {
    let params = advection_params(2.0, cfg.dt, 1.4)?;
    let mut failures = Vec::new();
    for dx in [0.99, 1.1, 1.2, 1.39] {
        let (e0, _) = classical_pair(0.2, 0.0, dx, &params, 1)?;
        let (q0, _) = quantum_pair(0.2, 0.0, dx, &params, 1)?;
        if e0 >= 0.0 || q0 >= 0.0 {
            failures.push(format!("dx={dx} expected negative, got cl={e0:.3e} q={q0:.3e}"));
        }
    }
    for dx in [0.3, 0.6, 0.9, 1.4, 1.5] {
        let (e0, _) = classical_pair(0.2, 0.0, dx, &params, 1)?;
        let (q0, _) = quantum_pair(0.2, 0.0, dx, &params, 1)?;
        if e0 < 0.0 || q0 < -1e-13 {
            failures.push(format!(
                "dx={dx} expected non-negative, got cl={e0:.3e} q={q0:.3e}"
            ));
        }
    }
    Ok(CheckResult {
        name: "instability-onset",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "u0 < 0 exactly on dx in (0.98, 1.4)".into()
        } else {
            failures.join("; ")
        },
    })
}

/// The explicit 8x8 shift and coin equal the embedded 2-qubit gates.
fn embedding_cross_check() -> CheckResult {
    let embed = |op: &Operator, targets: &[usize]| -> Operator {
        let dim = 8usize;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for col in 0..dim {
            let mut amps = vec![Complex64::ZERO; dim];
            amps[col] = Complex64::ONE;
            let out = StateVector::from_amplitudes(amps)
                .expect("basis state")
                .apply(op, targets)
                .expect("unitary gate");
            for row in 0..dim {
                entries[row * dim + col] = out.amp(row);
            }
        }
        Operator::from_entries(dim, entries).expect("square")
    };

    #[rustfmt::skip]
    let shift_rows: [f64; 64] = [
        1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    let shift8 = Operator::from_real(8, &shift_rows).expect("square");
    let mut worst = shift8.max_abs_diff(&embed(&two_particle_shift(), &[0, 2]));
    for alpha in [1.0, 0.8611111111111112, 0.5, -0.7] {
        let cp = CoinParams::from_alpha00(alpha);
        worst = worst.max(
            coin_operator_3q(&cp).max_abs_diff(&embed(&coin_operator_2q(&cp), &[0, 2])),
        );
    }
    CheckResult::bounded("embedding-cross-check", worst, 1e-14)
}
