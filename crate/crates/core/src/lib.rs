//! Quantum-walk time stepping for 1-D SPH advection.
//!
//! The crate has four layers:
//!
//! - [`statevector`]: a dense statevector engine with explicit target-qubit
//!   gate application, tensor products, and unitarity checks. The
//!   first-declared qubit is always the most-significant index bit.
//! - [`sph`]: the classical Eulerian solver for the 1-D advection equation
//!   with a triangular kernel; the ground truth everything else is compared
//!   against.
//! - [`encoding`]: the mapping from the advection sum to normalized quantum
//!   states, the update weights `alpha`, and the reversible block coin.
//! - [`circuit`]: the two-particle circuit over one to three timesteps and
//!   the post-processing that reads the advected values back out of the
//!   final statevector.
//!
//! The advected values after each step come out of the circuit identical to
//! the classical solver up to rounding:
//!
//! ```
//! use qsph_core::circuit::QsphCircuit;
//! use qsph_core::sph::{classical_step, AdvectionParams, KernelSpec, ParticleLine};
//!
//! let kernel = KernelSpec::triangular(1.2)?;
//! let params = AdvectionParams::unit_dt(1.0, kernel)?;
//! let line = ParticleLine::uniform(0.0, 0.2, vec![0.8, 0.4])?;
//!
//! let circuit = QsphCircuit::build(0.8, 0.4, 0.2, &params, 1)?;
//! let (u0, u1) = circuit.extract_solutions(&circuit.run()?)?;
//!
//! let stepped = classical_step(&line, &params);
//! assert!((u0 - stepped.u()[0]).abs() < 1e-12);
//! assert!((u1 - stepped.u()[1]).abs() < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod circuit;
pub mod encoding;
pub mod sph;
pub mod statevector;

pub use circuit::{encode_velocity, CircuitError, ExtractionPlan, QsphCircuit};
pub use encoding::{
    alpha_amplitudes, build_difference_state, build_kernel_state, coin_operator_2q,
    coin_operator_3q, in_support_neighbors, inner_product_update, AlphaAmplitudes, CoinParams,
    EncodedDifferenceState, EncodedKernelState, EncodingError,
};
pub use sph::{
    cfl_max_c, classical_evolve, classical_step, crossover_c, crossover_dx, grad_w,
    AdvectionParams, KernelKind, KernelSpec, ParticleLine, SphError,
};
pub use statevector::{
    cnot, hadamard, rotation, two_particle_shift, zero_state, Amplitude, Operator, StateVector,
    StateVectorError, MAX_QUBITS, UNITARY_TOL,
};
