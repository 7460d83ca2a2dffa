//! Shared one-shot runners for the two-particle system.

use qsph_core::circuit::QsphCircuit;
use qsph_core::encoding::CoinParams;
use qsph_core::sph::{classical_evolve, AdvectionParams, KernelSpec, ParticleLine};

use crate::HarnessError;

pub fn advection_params(c: f64, dt: f64, h: f64) -> Result<AdvectionParams, HarnessError> {
    Ok(AdvectionParams::new(c, dt, KernelSpec::triangular(h)?)?)
}

/// Quantum pipeline result for one cell: build, run, extract.
pub fn quantum_pair(
    u0: f64,
    u1: f64,
    dx: f64,
    params: &AdvectionParams,
    steps: usize,
) -> Result<(f64, f64), HarnessError> {
    let circuit = QsphCircuit::build(u0, u1, dx, params, steps)?;
    Ok(circuit.extract_solutions(&circuit.run()?)?)
}

/// Same pipeline with the coin weight shifted by `alpha_bias`; the unbiased
/// call is the production path, a nonzero bias is a negative control.
pub fn quantum_pair_biased(
    u0: f64,
    u1: f64,
    dx: f64,
    params: &AdvectionParams,
    steps: usize,
    alpha_bias: f64,
) -> Result<(f64, f64), HarnessError> {
    let coin = CoinParams::from_alpha00(CoinParams::for_pair(params, dx).alpha00() + alpha_bias);
    let circuit = QsphCircuit::build_with_coin(u0, u1, dx, steps, coin)?;
    Ok(circuit.extract_solutions(&circuit.run()?)?)
}

/// Quantum pipeline result plus the probability weight sitting on the
/// amplitudes the extraction reads with positive sign.
pub fn quantum_cell(
    u0: f64,
    u1: f64,
    dx: f64,
    params: &AdvectionParams,
    steps: usize,
) -> Result<(f64, f64, f64), HarnessError> {
    let circuit = QsphCircuit::build(u0, u1, dx, params, steps)?;
    let final_state = circuit.run()?;
    let (q0, q1) = circuit.extract_solutions(&final_state)?;
    let prob = circuit.success_probability(&final_state)?;
    Ok((q0, q1, prob))
}

/// Classical reference for the same cell.
pub fn classical_pair(
    u0: f64,
    u1: f64,
    dx: f64,
    params: &AdvectionParams,
    steps: usize,
) -> Result<(f64, f64), HarnessError> {
    let line = ParticleLine::uniform(0.0, dx, vec![u0, u1])?;
    let snaps = classical_evolve(&line, params, steps);
    let last = snaps.last().expect("evolve returns at least the input");
    Ok((last.u()[0], last.u()[1]))
}
