//! Minimal dense statevector engine.
//!
//! States are full 2^n complex amplitude vectors. The bit-ordering convention
//! is fixed throughout the crate: the first-declared qubit is the
//! most-significant index bit, so `tensor(a, b)` puts `a` on the high bits.
//! For a 2-qubit register the basis order is |00⟩, |01⟩, |10⟩, |11⟩ and a
//! velocity ⊗ neighbor product state reads `[u0, u0, u1, u1]` as a column.
//!
//! Gates are dense unitary matrices applied to an explicit list of target
//! qubits; `StateVector::apply` rejects matrices that fail the unitarity
//! check rather than silently applying them.

use num_complex::Complex64;
use thiserror::Error;

/// Complex amplitude entry of a state or operator.
pub type Amplitude = Complex64;

/// Default elementwise tolerance for the unitarity check.
pub const UNITARY_TOL: f64 = 1e-12;

/// Largest supported register size for the dense representation.
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum StateVectorError {
    #[error("qubit count must be between 1 and {MAX_QUBITS}, got {0}")]
    InvalidQubitCount(usize),
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    InvalidLength(usize),
    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),
    #[error("matrix dimension {0} is not a power of two >= 2")]
    InvalidDimension(usize),
    #[error("expected {expected} matrix entries, got {actual}")]
    EntryCountMismatch { expected: usize, actual: usize },
    #[error("operator dimension {op_dim} does not match 2^{n_targets} target qubits")]
    DimensionMismatch { op_dim: usize, n_targets: usize },
    #[error("target qubit {target} out of range for {n_qubits}-qubit state")]
    TargetOutOfRange { target: usize, n_qubits: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("operator is not unitary: max |U†U - I| = {deviation:e} exceeds {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },
    #[error("tensor result would exceed {MAX_QUBITS} qubits")]
    TooLarge,
}

/// Dense complex square matrix with power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Amplitude>, // row-major
}

impl Operator {
    /// Build an operator from row-major complex entries.
    pub fn from_entries(dim: usize, entries: Vec<Amplitude>) -> Result<Self, StateVectorError> {
        if dim < 2 || !dim.is_power_of_two() {
            return Err(StateVectorError::InvalidDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(StateVectorError::EntryCountMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|a| !a.is_finite()) {
            return Err(StateVectorError::NonFinite(i));
        }
        Ok(Operator { dim, entries })
    }

    /// Build an operator from row-major real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self, StateVectorError> {
        Self::from_entries(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Result<Self, StateVectorError> {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex64::ONE;
        }
        Self::from_entries(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    /// Number of qubits this operator acts on (log2 of the dimension).
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Operator) -> Result<Operator, StateVectorError> {
        if self.dim != rhs.dim {
            return Err(StateVectorError::DimensionMismatch {
                op_dim: rhs.dim,
                n_targets: self.n_qubits(),
            });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * rhs.get(k, c);
                }
            }
        }
        Operator::from_entries(d, entries)
    }

    /// Kronecker product with `self` on the most-significant bits.
    pub fn tensor(&self, rhs: &Operator) -> Result<Operator, StateVectorError> {
        if self.n_qubits() + rhs.n_qubits() > MAX_QUBITS {
            return Err(StateVectorError::TooLarge);
        }
        let (da, db) = (self.dim, rhs.dim);
        let d = da * db;
        let mut entries = vec![Complex64::ZERO; d * d];
        for ra in 0..da {
            for ca in 0..da {
                let a = self.get(ra, ca);
                for rb in 0..db {
                    for cb in 0..db {
                        entries[(ra * db + rb) * d + (ca * db + cb)] = a * rhs.get(rb, cb);
                    }
                }
            }
        }
        Operator::from_entries(d, entries)
    }

    /// Max elementwise modulus of `U†U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::ZERO;
                for k in 0..d {
                    acc += self.get(k, r).conj() * self.get(k, c);
                }
                let target = if r == c { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// True iff `max |U†U - I| <= tol` elementwise.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Max elementwise modulus of the difference to another operator.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The unbiased walk coin: (1/√2) [[1, 1], [1, -1]].
pub fn hadamard() -> Operator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Operator::from_real(2, &[s, s, s, -s]).expect("static gate")
}

/// Two-particle shift: the 4x4 permutation exchanging |01⟩ and |10⟩.
///
/// On a velocity ⊗ neighbor register this transfers neighbor information
/// between the two particles, turning `[u0, u0, u1, u1]` into
/// `[u0, u1, u0, u1]`.
pub fn two_particle_shift() -> Operator {
    #[rustfmt::skip]
    let entries = [
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ];
    Operator::from_real(4, &entries).expect("static gate")
}

/// Controlled-NOT with the first (most-significant) target as control.
pub fn cnot() -> Operator {
    #[rustfmt::skip]
    let entries = [
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    ];
    Operator::from_real(4, &entries).expect("static gate")
}

/// Real single-qubit rotation [[cos θ, -sin θ], [sin θ, cos θ]].
pub fn rotation(theta: f64) -> Operator {
    let (s, c) = theta.sin_cos();
    Operator::from_real(2, &[c, -s, s, c]).expect("static gate")
}

/// Complex amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

/// All-zeros computational basis state |0...0⟩.
pub fn zero_state(n_qubits: usize) -> Result<StateVector, StateVectorError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(StateVectorError::InvalidQubitCount(n_qubits));
    }
    let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
    amps[0] = Complex64::ONE;
    Ok(StateVector { n_qubits, amps })
}

impl StateVector {
    /// Build a state from explicit amplitudes (length must be a power of two).
    ///
    /// Normalization is not enforced; gates preserve whatever norm the
    /// caller provides.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self, StateVectorError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(StateVectorError::InvalidLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(StateVectorError::InvalidQubitCount(n_qubits));
        }
        if let Some(i) = amps.iter().position(|a| !a.is_finite()) {
            return Err(StateVectorError::NonFinite(i));
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Build a state from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self, StateVectorError> {
        Self::from_amplitudes(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor product with `self` on the most-significant bits.
    pub fn tensor(&self, rhs: &StateVector) -> Result<StateVector, StateVectorError> {
        if self.n_qubits + rhs.n_qubits > MAX_QUBITS {
            return Err(StateVectorError::TooLarge);
        }
        let mut amps = Vec::with_capacity(self.amps.len() * rhs.amps.len());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        StateVector::from_amplitudes(amps)
    }

    /// Apply `op` to the listed target qubits, checking unitarity first.
    ///
    /// The first listed target maps to the most-significant bit of the
    /// operator's index. Qubit indices are zero-based with qubit 0 the
    /// most-significant register bit.
    pub fn apply(&self, op: &Operator, targets: &[usize]) -> Result<StateVector, StateVectorError> {
        self.check_targets(op, targets)?;
        let deviation = op.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(StateVectorError::NotUnitary {
                deviation,
                tol: UNITARY_TOL,
            });
        }
        Ok(self.apply_unchecked(op, targets))
    }

    fn check_targets(&self, op: &Operator, targets: &[usize]) -> Result<(), StateVectorError> {
        if op.dim != 1usize << targets.len() {
            return Err(StateVectorError::DimensionMismatch {
                op_dim: op.dim,
                n_targets: targets.len(),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n_qubits {
                return Err(StateVectorError::TargetOutOfRange {
                    target: t,
                    n_qubits: self.n_qubits,
                });
            }
            if targets[..i].contains(&t) {
                return Err(StateVectorError::DuplicateTarget(t));
            }
        }
        Ok(())
    }

    // Embedding without the unitarity gate; only tests may reach for this
    // directly.
    pub(crate) fn apply_unchecked(&self, op: &Operator, targets: &[usize]) -> StateVector {
        let n = self.n_qubits;
        let k = targets.len();
        let sub_dim = 1usize << k;
        // Bit shift (from the LSB) for each target qubit.
        let shifts: Vec<usize> = targets.iter().map(|&q| n - 1 - q).collect();
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut row = 0usize;
            let mut base = i;
            for (m, &s) in shifts.iter().enumerate() {
                row |= ((i >> s) & 1) << (k - 1 - m);
                base &= !(1 << s);
            }
            let mut acc = Complex64::ZERO;
            for col in 0..sub_dim {
                let entry = op.get(row, col);
                if entry == Complex64::ZERO {
                    continue;
                }
                let mut j = base;
                for (m, &s) in shifts.iter().enumerate() {
                    j |= ((col >> (k - 1 - m)) & 1) << s;
                }
                acc += entry * self.amps[j];
            }
            *slot = acc;
        }
        StateVector {
            n_qubits: n,
            amps: out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_close(actual: &StateVector, expected: &[f64], tol: f64) {
        assert_eq!(actual.amplitudes().len(), expected.len());
        for (i, (a, e)) in actual.amplitudes().iter().zip(expected).enumerate() {
            assert!(
                (a - Complex64::new(*e, 0.0)).norm() <= tol,
                "index {i}: got {a}, expected {e}"
            );
        }
    }

    /// Independent embedding oracle: the full 2^n matrix of `op` on `targets`
    /// (identity elsewhere), built entry by entry from the definition.
    fn embedded_matrix(op: &Operator, targets: &[usize], n: usize) -> Vec<Vec<Complex64>> {
        let dim = 1usize << n;
        let k = targets.len();
        let shifts: Vec<usize> = targets.iter().map(|&q| n - 1 - q).collect();
        let sub = |full: usize| -> usize {
            let mut s = 0;
            for (m, &sh) in shifts.iter().enumerate() {
                s |= ((full >> sh) & 1) << (k - 1 - m);
            }
            s
        };
        let rest = |full: usize| -> usize {
            let mut r = full;
            for &sh in &shifts {
                r &= !(1 << sh);
            }
            r
        };
        let mut m = vec![vec![Complex64::ZERO; dim]; dim];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if rest(i) == rest(j) {
                    *cell = op.get(sub(i), sub(j));
                }
            }
        }
        m
    }

    fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn zero_state_basics() {
        let s = zero_state(1).unwrap();
        assert_close(&s, &[1.0, 0.0], 0.0);
        let s = zero_state(2).unwrap();
        assert_close(&s, &[1.0, 0.0, 0.0, 0.0], 0.0);
        let s = zero_state(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amp(0), Complex64::ONE);
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn zero_state_rejects_bad_counts() {
        assert_eq!(zero_state(0), Err(StateVectorError::InvalidQubitCount(0)));
        assert_eq!(zero_state(21), Err(StateVectorError::InvalidQubitCount(21)));
    }

    #[test]
    fn hadamard_on_ground() {
        let s = zero_state(1).unwrap().apply(&hadamard(), &[0]).unwrap();
        assert_close(&s, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2], 1e-15);
    }

    #[test]
    fn hadamard_is_involution() {
        let hh = hadamard().matmul(&hadamard()).unwrap();
        assert!(hh.max_abs_diff(&Operator::identity(2).unwrap()) <= 1e-15);
    }

    #[test]
    fn hadamard_rotates_minus_basis() {
        let s = StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        let s = s.apply(&hadamard(), &[0]).unwrap();
        assert_close(&s, &[0.0, 1.0], 1e-15);
    }

    #[test]
    fn shift_transfers_neighbor_information() {
        let (u0, u1) = (0.8f64, 0.4f64);
        let c = 1.0 / (u0 * u0 + u1 * u1).sqrt();
        let k = c * FRAC_1_SQRT_2;
        let s = StateVector::from_real(&[k * u0, k * u0, k * u1, k * u1]).unwrap();
        let s = s.apply(&two_particle_shift(), &[0, 1]).unwrap();
        assert_close(&s, &[k * u0, k * u1, k * u0, k * u1], 1e-15);
    }

    #[test]
    fn shift_is_involution() {
        let ss = two_particle_shift()
            .matmul(&two_particle_shift())
            .unwrap();
        assert!(ss.max_abs_diff(&Operator::identity(4).unwrap()) == 0.0);
    }

    #[test]
    fn shift_permutes_middle_indices() {
        let s = StateVector::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = s.apply(&two_particle_shift(), &[0, 1]).unwrap();
        assert_close(&s, &[1.0, 3.0, 2.0, 4.0], 0.0);
    }

    /// The 8x8 shift acting on qubits (0, 2) of a 3-qubit register,
    /// transcribed as printed: a permutation that leaves the middle qubit
    /// alone and swaps the outer pair 01 <-> 10.
    fn shift_8x8() -> Vec<Vec<Complex64>> {
        #[rustfmt::skip]
        let rows: [[f64; 8]; 8] = [
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        rows.iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect()
    }

    #[test]
    fn shift_embedding_matches_explicit_8x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let amps: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();

        let applied = s.apply(&two_particle_shift(), &[0, 2]).unwrap();
        let expected = matvec(&shift_8x8(), &amps);
        for (a, e) in applied.amplitudes().iter().zip(&expected) {
            assert!((a - e).norm() <= 1e-14);
        }
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = StateVector::from_real(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).unwrap();
        for targets in [vec![0], vec![1], vec![2]] {
            let out = s.apply(&Operator::identity(2).unwrap(), &targets).unwrap();
            assert_eq!(out.amplitudes(), s.amplitudes());
        }
        let out = s.apply(&Operator::identity(4).unwrap(), &[2, 0]).unwrap();
        assert_eq!(out.amplitudes(), s.amplitudes());
    }

    #[test]
    fn hadamard_on_second_qubit() {
        let s = zero_state(2).unwrap().apply(&hadamard(), &[1]).unwrap();
        assert_close(&s, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn apply_rejects_non_unitary() {
        let shear = Operator::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let err = zero_state(1).unwrap().apply(&shear, &[0]).unwrap_err();
        assert!(matches!(err, StateVectorError::NotUnitary { .. }));
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let s = zero_state(2).unwrap();
        assert!(matches!(
            s.apply(&hadamard(), &[0, 1]).unwrap_err(),
            StateVectorError::DimensionMismatch { .. }
        ));
        assert!(matches!(
            s.apply(&hadamard(), &[2]).unwrap_err(),
            StateVectorError::TargetOutOfRange { .. }
        ));
        assert!(matches!(
            s.apply(&two_particle_shift(), &[1, 1]).unwrap_err(),
            StateVectorError::DuplicateTarget(1)
        ));
    }

    #[test]
    fn tensor_states() {
        let u = StateVector::from_real(&[0.8, 0.4]).unwrap();
        let v = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let t = u.tensor(&v).unwrap();
        let k = FRAC_1_SQRT_2;
        assert_close(&t, &[0.8 * k, 0.8 * k, 0.4 * k, 0.4 * k], 1e-15);

        let a = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[0.0, 1.0]).unwrap();
        assert_close(&a.tensor(&b).unwrap(), &[0.0, 1.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn tensor_operators() {
        let i2 = Operator::identity(2).unwrap();
        let i4 = i2.tensor(&i2).unwrap();
        assert!(i4.max_abs_diff(&Operator::identity(4).unwrap()) == 0.0);
    }

    #[test]
    fn is_unitary_examples() {
        assert!(hadamard().is_unitary(1e-12));
        assert!(two_particle_shift().is_unitary(1e-12));
        assert!(cnot().is_unitary(1e-12));
        assert!(rotation(0.3).is_unitary(1e-12));
        let shear = Operator::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(!shear.is_unitary(1e-12));
    }

    #[test]
    fn bit_ordering_round_trip() {
        // Recover both factors of a product state from tensor slices.
        let a = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let b = StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        let t = a.tensor(&b).unwrap();
        let bl = b.amplitudes().len();
        // a_i proportional to the slice with fixed b index.
        for i in 0..a.amplitudes().len() {
            let recovered = t.amp(i * bl) / b.amp(0);
            assert!((recovered - a.amp(i)).norm() <= 1e-14);
        }
        for j in 0..bl {
            let recovered = t.amp(j) / a.amp(0);
            assert!((recovered - b.amp(j)).norm() <= 1e-14);
        }
    }

    fn repo_gates() -> Vec<Operator> {
        vec![
            hadamard(),
            two_particle_shift(),
            cnot(),
            rotation(0.7),
            rotation(-2.1),
        ]
    }

    #[test]
    fn norm_preserved_under_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let gates = repo_gates();
        for _ in 0..120 {
            let n = rng.random_range(1..=6usize);
            let mut amps: Vec<Complex64> = (0..1 << n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            let mut s = StateVector::from_amplitudes(amps).unwrap();
            for _ in 0..4 {
                let op = &gates[rng.random_range(0..gates.len())];
                let k = op.n_qubits();
                if k > n {
                    continue;
                }
                let mut targets: Vec<usize> = (0..n).collect();
                targets.shuffle(&mut rng);
                targets.truncate(k);
                s = s.apply(op, &targets).unwrap();
                assert!((s.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn apply_matches_embedded_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gates = repo_gates();
        for n in 1..=4usize {
            for op in &gates {
                let k = op.n_qubits();
                if k > n {
                    continue;
                }
                for _ in 0..8 {
                    let mut targets: Vec<usize> = (0..n).collect();
                    targets.shuffle(&mut rng);
                    targets.truncate(k);
                    let amps: Vec<Complex64> = (0..1 << n)
                        .map(|_| {
                            Complex64::new(
                                rng.random_range(-1.0..1.0),
                                rng.random_range(-1.0..1.0),
                            )
                        })
                        .collect();
                    let s = StateVector::from_amplitudes(amps.clone()).unwrap();
                    let fast = s.apply_unchecked(op, &targets);
                    let slow = matvec(&embedded_matrix(op, &targets, n), &amps);
                    for (a, e) in fast.amplitudes().iter().zip(&slow) {
                        assert!((a - e).norm() <= 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_finite_amplitudes() {
        let err = StateVector::from_real(&[f64::NAN, 0.0]).unwrap_err();
        assert_eq!(err, StateVectorError::NonFinite(0));
        let err = Operator::from_real(2, &[1.0, 0.0, f64::INFINITY, 1.0]).unwrap_err();
        assert_eq!(err, StateVectorError::NonFinite(2));
    }
}
