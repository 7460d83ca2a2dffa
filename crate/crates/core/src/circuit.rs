//! The two-particle quantum circuit over one to three timesteps.
//!
//! Register layout: qubit 0 carries the velocity amplitudes, qubit `t`
//! (1-based timestep t) is the neighbor register introduced for that step.
//! Per timestep the circuit applies a Hadamard on the fresh neighbor qubit,
//! an entangling CNOT, the shift, and the normalized coin, always on the
//! (velocity, neighbor-t) pair. The final statevector holds the advected
//! values in fixed linear combinations of its amplitudes alongside junk
//! terms that make the coin reversible; `extract_solutions` reads the
//! values back out.

use thiserror::Error;

use crate::encoding::{coin_operator_2q, CoinParams};
use crate::sph::AdvectionParams;
use crate::statevector::{
    cnot, hadamard, two_particle_shift, zero_state, Operator, StateVector, StateVectorError,
};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("timesteps must be between 1 and 3, got {0}")]
    UnsupportedTimesteps(usize),
    #[error("velocity inputs must not both be zero")]
    ZeroVelocity,
    #[error("velocity inputs must be finite")]
    NonFiniteVelocity,
    #[error("particle spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    #[error("state has {actual} qubits, circuit expects {expected}")]
    StateSizeMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    StateVector(#[from] StateVectorError),
}

/// Amplitude-encode a velocity pair on one qubit.
///
/// Returns the state `C [u0, u1]` together with the normalizer
/// `C = (u0^2 + u1^2)^(-1/2)`. The encoding is a plain rotation, so signs
/// pass through.
pub fn encode_velocity(u0: f64, u1: f64) -> Result<(StateVector, f64), CircuitError> {
    let gate = encoding_rotation(u0, u1)?;
    let state = zero_state(1)?.apply(&gate, &[0])?;
    Ok((state, 1.0 / (u0 * u0 + u1 * u1).sqrt()))
}

/// Rotation whose first column is the normalized velocity pair.
fn encoding_rotation(u0: f64, u1: f64) -> Result<Operator, CircuitError> {
    if !u0.is_finite() || !u1.is_finite() {
        return Err(CircuitError::NonFiniteVelocity);
    }
    let norm = (u0 * u0 + u1 * u1).sqrt();
    if norm == 0.0 {
        return Err(CircuitError::ZeroVelocity);
    }
    let (cos, sin) = (u0 / norm, u1 / norm);
    Ok(Operator::from_real(2, &[cos, -sin, sin, cos]).expect("static shape"))
}

/// Signed, weighted amplitude indices that recover `u0(T)` and `u1(T)` from
/// the final statevector, and the constant the sums are divided by.
///
/// The T = 1 entries read single amplitudes; T = 2 takes the half-weight
/// pair combinations that cancel the junk terms; T = 3 repeats that pattern
/// once more at quarter weight. The divisor is `C (N/sqrt(2))^T`: one
/// velocity normalizer, and per timestep one coin normalizer and one
/// neighbor-register 1/sqrt(2).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionPlan {
    timesteps: usize,
    u0_terms: Vec<(usize, f64)>,
    u1_terms: Vec<(usize, f64)>,
    scale: f64,
}

/// Sign tables for the quarter-weight T = 3 combinations over the 16-vector.
const U0_SIGNS_T3: [f64; 16] = [
    1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0,
];
const U1_SIGNS_T3: [f64; 16] = [
    -1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
];

impl ExtractionPlan {
    fn new(
        timesteps: usize,
        velocity_norm: f64,
        coin_norm: f64,
    ) -> Result<ExtractionPlan, CircuitError> {
        let (u0_terms, u1_terms) = match timesteps {
            1 => (vec![(0, 1.0)], vec![(3, 1.0)]),
            2 => (
                vec![(0, 0.5), (4, -0.5), (2, 0.5), (6, 0.5)],
                vec![(7, 0.5), (3, -0.5), (1, 0.5), (5, 0.5)],
            ),
            3 => (
                U0_SIGNS_T3
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i, 0.25 * s))
                    .collect(),
                U1_SIGNS_T3
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i, 0.25 * s))
                    .collect(),
            ),
            other => return Err(CircuitError::UnsupportedTimesteps(other)),
        };
        let scale = velocity_norm * (coin_norm * FRAC_1_SQRT_2).powi(timesteps as i32);
        Ok(ExtractionPlan {
            timesteps,
            u0_terms,
            u1_terms,
            scale,
        })
    }

    pub fn timesteps(&self) -> usize {
        self.timesteps
    }

    pub fn u0_terms(&self) -> &[(usize, f64)] {
        &self.u0_terms
    }

    pub fn u1_terms(&self) -> &[(usize, f64)] {
        &self.u1_terms
    }

    /// Constant the weighted amplitude sums are divided by.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Prepared gate sequence for a two-particle run over 1-3 timesteps.
#[derive(Debug, Clone)]
pub struct QsphCircuit {
    timesteps: usize,
    n_qubits: usize,
    gates: Vec<(Operator, Vec<usize>)>,
    velocity_norm: f64,
    coin: CoinParams,
    plan: ExtractionPlan,
}

impl QsphCircuit {
    /// Circuit with the coin derived from the advection parameters and the
    /// particle spacing.
    pub fn build(
        u0: f64,
        u1: f64,
        spacing: f64,
        params: &AdvectionParams,
        timesteps: usize,
    ) -> Result<QsphCircuit, CircuitError> {
        Self::build_with_coin(u0, u1, spacing, timesteps, CoinParams::for_pair(params, spacing))
    }

    /// Circuit with an explicitly supplied coin. Used by diagnostics that
    /// need to perturb the coin away from the advection-derived one.
    pub fn build_with_coin(
        u0: f64,
        u1: f64,
        spacing: f64,
        timesteps: usize,
        coin: CoinParams,
    ) -> Result<QsphCircuit, CircuitError> {
        if !(1..=3).contains(&timesteps) {
            return Err(CircuitError::UnsupportedTimesteps(timesteps));
        }
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(CircuitError::InvalidSpacing(spacing));
        }
        let encode = encoding_rotation(u0, u1)?;
        let velocity_norm = 1.0 / (u0 * u0 + u1 * u1).sqrt();
        let n_qubits = 1 + timesteps;

        let coin_gate = coin_operator_2q(&coin);
        let mut gates: Vec<(Operator, Vec<usize>)> = Vec::with_capacity(1 + 4 * timesteps);
        gates.push((encode, vec![0]));
        for t in 1..=timesteps {
            gates.push((hadamard(), vec![t]));
            gates.push((cnot(), vec![0, t]));
            gates.push((two_particle_shift(), vec![0, t]));
            gates.push((coin_gate.clone(), vec![0, t]));
        }

        let plan = ExtractionPlan::new(timesteps, velocity_norm, coin.normalizer())?;
        Ok(QsphCircuit {
            timesteps,
            n_qubits,
            gates,
            velocity_norm,
            coin,
            plan,
        })
    }

    pub fn timesteps(&self) -> usize {
        self.timesteps
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[(Operator, Vec<usize>)] {
        &self.gates
    }

    /// The velocity-encoding normalizer C.
    pub fn velocity_norm(&self) -> f64 {
        self.velocity_norm
    }

    pub fn coin(&self) -> &CoinParams {
        &self.coin
    }

    pub fn extraction_plan(&self) -> &ExtractionPlan {
        &self.plan
    }

    /// Run the gate sequence on the all-zeros register.
    pub fn run(&self) -> Result<StateVector, CircuitError> {
        let mut state = zero_state(self.n_qubits)?;
        for (gate, targets) in &self.gates {
            state = state.apply(gate, targets)?;
        }
        Ok(state)
    }

    /// Read `(u0(T), u1(T))` out of a final statevector.
    pub fn extract_solutions(&self, final_state: &StateVector) -> Result<(f64, f64), CircuitError> {
        self.check_state(final_state)?;
        let read = |terms: &[(usize, f64)]| -> f64 {
            terms
                .iter()
                .map(|&(idx, w)| w * final_state.amp(idx).re)
                .sum::<f64>()
                / self.plan.scale
        };
        Ok((read(&self.plan.u0_terms), read(&self.plan.u1_terms)))
    }

    /// Summed probability weight on the amplitudes the extraction consumes
    /// with positive coefficients; the remainder sits in junk terms.
    pub fn success_probability(&self, final_state: &StateVector) -> Result<f64, CircuitError> {
        self.check_state(final_state)?;
        let mut indices: Vec<usize> = self
            .plan
            .u0_terms
            .iter()
            .chain(&self.plan.u1_terms)
            .filter(|&&(_, w)| w > 0.0)
            .map(|&(idx, _)| idx)
            .collect();
        indices.sort_unstable();
        indices.dedup();
        Ok(indices
            .iter()
            .map(|&idx| final_state.amp(idx).norm_sqr())
            .sum())
    }

    fn check_state(&self, state: &StateVector) -> Result<(), CircuitError> {
        if state.n_qubits() != self.n_qubits {
            return Err(CircuitError::StateSizeMismatch {
                expected: self.n_qubits,
                actual: state.n_qubits(),
            });
        }
        Ok(())
    }
}
