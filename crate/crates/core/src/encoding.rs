//! Encoding layer between the classical solver and the quantum circuit.
//!
//! The advection sum is recast as the real part of an inner product between
//! two normalized vectors: a difference state with entries `(u_k - u_j) dx`
//! and a kernel state whose entries are `grad_w / (nu N) + i b_jk`. The
//! imaginary parts `b_jk` pad each component to squared modulus exactly
//! `1/N`, so the kernel state is a valid quantum state while its real parts
//! still carry the gradients.
//!
//! From the same quantities come the update weights `alpha` and the
//! reversible coin: a block matrix in `alpha00` and `1 - alpha00` scaled by
//! the normalizer `N = (alpha00^2 + (1 - alpha00)^2)^(-1/2)`, unitary for
//! every real `alpha00`.
//!
//! The difference-state norm is the exact Euclidean vector norm. A continuum
//! integral over the squared differences would approximate the same
//! quantity, but only the vector norm cancels exactly against the bra side,
//! which the equivalence with the classical step requires.

use num_complex::Complex64;
use thiserror::Error;

use crate::sph::{grad_w, AdvectionParams, KernelSpec, ParticleLine};
use crate::statevector::Operator;

#[derive(Debug, Error, PartialEq)]
pub enum EncodingError {
    #[error("difference vector is zero; the update carries no information")]
    DegenerateState,
    #[error("no neighbor inside the kernel support")]
    NoInteraction,
    #[error("neighbor list is empty")]
    NoNeighbors,
    #[error("particle {0} cannot be its own neighbor")]
    SelfNeighbor(usize),
    #[error("duplicate neighbor index {0}")]
    DuplicateNeighbor(usize),
    #[error("index {index} out of range for line of {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

fn validate_neighbors(
    line: &ParticleLine,
    j: usize,
    neighbors: &[usize],
) -> Result<(), EncodingError> {
    let len = line.len();
    if j >= len {
        return Err(EncodingError::IndexOutOfRange { index: j, len });
    }
    if neighbors.is_empty() {
        return Err(EncodingError::NoNeighbors);
    }
    for (i, &k) in neighbors.iter().enumerate() {
        if k >= len {
            return Err(EncodingError::IndexOutOfRange { index: k, len });
        }
        if k == j {
            return Err(EncodingError::SelfNeighbor(j));
        }
        if neighbors[..i].contains(&k) {
            return Err(EncodingError::DuplicateNeighbor(k));
        }
    }
    Ok(())
}

/// Indices of all particles within the kernel support of particle `j`.
pub fn in_support_neighbors(line: &ParticleLine, j: usize, kernel: &KernelSpec) -> Vec<usize> {
    let x_j = line.positions()[j];
    (0..line.len())
        .filter(|&k| k != j && (line.positions()[k] - x_j).abs() < kernel.h())
        .collect()
}

/// Normalized difference vector `(u_k - u_j) dx` over a neighbor list.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDifferenceState {
    components: Vec<f64>,
    norm_a: f64,
}

impl EncodedDifferenceState {
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Euclidean norm of the raw component vector.
    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }
}

pub fn build_difference_state(
    line: &ParticleLine,
    j: usize,
    neighbors: &[usize],
) -> Result<EncodedDifferenceState, EncodingError> {
    validate_neighbors(line, j, neighbors)?;
    let u = line.u();
    let dx = line.spacing();
    let components: Vec<f64> = neighbors.iter().map(|&k| (u[k] - u[j]) * dx).collect();
    let norm_a = components.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm_a == 0.0 {
        return Err(EncodingError::DegenerateState);
    }
    Ok(EncodedDifferenceState { components, norm_a })
}

/// Kernel state: complex components `grad/(nu N) + i b` with squared modulus
/// exactly `1/N` each, unit Euclidean norm overall.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedKernelState {
    components: Vec<Complex64>,
    nu: f64,
    n_neighbors: usize,
    b: Vec<f64>,
}

impl EncodedKernelState {
    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// The gradient normalizer: max |grad_w| over the neighbor list.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_neighbors(&self) -> usize {
        self.n_neighbors
    }

    /// Imaginary paddings b_jk.
    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

pub fn build_kernel_state(
    line: &ParticleLine,
    j: usize,
    neighbors: &[usize],
    kernel: &KernelSpec,
) -> Result<EncodedKernelState, EncodingError> {
    validate_neighbors(line, j, neighbors)?;
    let grads: Vec<f64> = neighbors
        .iter()
        .map(|&k| grad_w(j, k, line, kernel).expect("validated indices"))
        .collect();
    let nu = grads.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
    if nu == 0.0 {
        return Err(EncodingError::NoInteraction);
    }
    let n = neighbors.len() as f64;
    let mut components = Vec::with_capacity(grads.len());
    let mut b = Vec::with_capacity(grads.len());
    for g in &grads {
        let re = g / (nu * n);
        // |re| <= 1/N <= 1/sqrt(N), so the radicand cannot go negative.
        let pad = (1.0 / n - re * re).sqrt();
        components.push(Complex64::new(re, pad));
        b.push(pad);
    }
    Ok(EncodedKernelState {
        components,
        nu,
        n_neighbors: neighbors.len(),
        b,
    })
}

/// One inner-product advection update for particle `j`.
///
/// Computes `u_j - c dt nu N ||a|| Re<a|W>` over the in-support subset of
/// the given neighbors. A constant field (degenerate difference vector) or
/// an empty in-support subset leaves `u_j` unchanged, matching the classical
/// step in both cases.
pub fn inner_product_update(
    line: &ParticleLine,
    j: usize,
    neighbors: &[usize],
    params: &AdvectionParams,
) -> Result<f64, EncodingError> {
    validate_neighbors(line, j, neighbors)?;
    let u_j = line.u()[j];
    let x_j = line.positions()[j];
    let in_support: Vec<usize> = neighbors
        .iter()
        .copied()
        .filter(|&k| (line.positions()[k] - x_j).abs() < params.kernel.h())
        .collect();
    if in_support.is_empty() {
        return Ok(u_j);
    }
    let kernel_state = match build_kernel_state(line, j, &in_support, &params.kernel) {
        Ok(state) => state,
        Err(EncodingError::NoInteraction) => return Ok(u_j),
        Err(other) => return Err(other),
    };
    let difference = match build_difference_state(line, j, &in_support) {
        Ok(state) => state,
        Err(EncodingError::DegenerateState) => return Ok(u_j),
        Err(other) => return Err(other),
    };
    // <a| = a*/||a||; a is real, so the inner product's real part is a plain
    // dot product against the components' real parts.
    let re_inner: f64 = difference
        .components()
        .iter()
        .zip(kernel_state.components())
        .map(|(a, w)| (a / difference.norm_a()) * w.re)
        .sum();
    let n = kernel_state.n_neighbors() as f64;
    Ok(u_j
        - params.c * params.dt * kernel_state.nu() * n * difference.norm_a() * re_inner)
}

/// Update weights for one particle: `u_j' = alpha_jj u_j + sum alpha_kj u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaAmplitudes {
    alpha_jj: f64,
    neighbors: Vec<usize>,
    alpha_kj: Vec<f64>,
}

impl AlphaAmplitudes {
    pub fn alpha_jj(&self) -> f64 {
        self.alpha_jj
    }

    /// Neighbor indices the weights are aligned with.
    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn alpha_kj(&self) -> &[f64] {
        &self.alpha_kj
    }

    /// Apply the weighted update to a value vector.
    pub fn reconstruct(&self, u: &[f64], j: usize) -> f64 {
        let mut next = self.alpha_jj * u[j];
        for (&k, &w) in self.neighbors.iter().zip(&self.alpha_kj) {
            next += w * u[k];
        }
        next
    }
}

/// Update weights from the kernel state: `alpha_kj = -c dt nu N dx Re(V_jk)`
/// and `alpha_jj = 1 + c dt nu N dx Re(sum V_jk)`.
///
/// Out-of-support neighbors get weight zero; with no in-support neighbor the
/// result is the identity update.
pub fn alpha_amplitudes(
    line: &ParticleLine,
    j: usize,
    neighbors: &[usize],
    params: &AdvectionParams,
) -> Result<AlphaAmplitudes, EncodingError> {
    validate_neighbors(line, j, neighbors)?;
    let x_j = line.positions()[j];
    let in_support: Vec<usize> = neighbors
        .iter()
        .copied()
        .filter(|&k| (line.positions()[k] - x_j).abs() < params.kernel.h())
        .collect();
    let mut alpha_kj = vec![0.0; neighbors.len()];
    if in_support.is_empty() {
        return Ok(AlphaAmplitudes {
            alpha_jj: 1.0,
            neighbors: neighbors.to_vec(),
            alpha_kj,
        });
    }
    let kernel_state = match build_kernel_state(line, j, &in_support, &params.kernel) {
        Ok(state) => state,
        Err(EncodingError::NoInteraction) => {
            return Ok(AlphaAmplitudes {
                alpha_jj: 1.0,
                neighbors: neighbors.to_vec(),
                alpha_kj,
            })
        }
        Err(other) => return Err(other),
    };
    let scale = params.c * params.dt
        * kernel_state.nu()
        * kernel_state.n_neighbors() as f64
        * line.spacing();
    let mut re_sum = 0.0;
    for (&k, w) in in_support.iter().zip(kernel_state.components()) {
        let slot = neighbors.iter().position(|&n| n == k).expect("subset");
        alpha_kj[slot] = -scale * w.re;
        re_sum += w.re;
    }
    Ok(AlphaAmplitudes {
        alpha_jj: 1.0 + scale * re_sum,
        neighbors: neighbors.to_vec(),
        alpha_kj,
    })
}

/// Coin weights for the two-particle system, plus their normalizer.
///
/// The off-diagonal weights are pinned to `1 - alpha00` and the second
/// diagonal weight to `alpha00`; the normalizer makes the block coin unitary
/// for any real `alpha00`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    alpha00: f64,
    alpha01: f64,
    alpha10: f64,
    alpha11: f64,
    normalizer: f64,
}

impl CoinParams {
    pub fn from_alpha00(alpha00: f64) -> CoinParams {
        let off = 1.0 - alpha00;
        CoinParams {
            alpha00,
            alpha01: off,
            alpha10: off,
            alpha11: alpha00,
            normalizer: 1.0 / (alpha00 * alpha00 + off * off).sqrt(),
        }
    }

    /// Coin for two particles at the given spacing:
    /// `alpha00 = 1 + c dt dx grad_w`, which is `1 - c dt dx / h^2` inside
    /// the support and exactly 1 outside it.
    pub fn for_pair(params: &AdvectionParams, spacing: f64) -> CoinParams {
        let grad = params.kernel.dw(spacing.abs());
        Self::from_alpha00(1.0 + params.c * params.dt * spacing * grad)
    }

    pub fn alpha00(&self) -> f64 {
        self.alpha00
    }

    pub fn alpha01(&self) -> f64 {
        self.alpha01
    }

    pub fn alpha10(&self) -> f64 {
        self.alpha10
    }

    pub fn alpha11(&self) -> f64 {
        self.alpha11
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }
}

/// The normalized reversible coin on (velocity, neighbor):
/// `N * blockdiag(H0, H1)` with `H0 = [[a, 1-a], [1-a, -a]]` and
/// `H1 = [[-a, 1-a], [1-a, a]]`.
pub fn coin_operator_2q(cp: &CoinParams) -> Operator {
    let a = cp.alpha00 * cp.normalizer;
    let b = cp.alpha10 * cp.normalizer;
    #[rustfmt::skip]
    let entries = [
        a,   b,   0.0, 0.0,
        b,  -a,   0.0, 0.0,
        0.0, 0.0, -a,  b,
        0.0, 0.0,  b,  a,
    ];
    Operator::from_real(4, &entries).expect("static shape")
}

/// The same coin embedded on the outer qubits of a 3-qubit register, with
/// the middle qubit untouched, written out as the explicit 8x8 blocks.
pub fn coin_operator_3q(cp: &CoinParams) -> Operator {
    let a = cp.alpha00 * cp.normalizer;
    let b = cp.alpha10 * cp.normalizer;
    #[rustfmt::skip]
    let entries = [
        a,   b,   0.0, 0.0,  0.0, 0.0,  0.0, 0.0,
        b,  -a,   0.0, 0.0,  0.0, 0.0,  0.0, 0.0,
        0.0, 0.0,  a,   b,   0.0, 0.0,  0.0, 0.0,
        0.0, 0.0,  b,  -a,   0.0, 0.0,  0.0, 0.0,
        0.0, 0.0,  0.0, 0.0, -a,   b,   0.0, 0.0,
        0.0, 0.0,  0.0, 0.0,  b,   a,   0.0, 0.0,
        0.0, 0.0,  0.0, 0.0,  0.0, 0.0, -a,   b,
        0.0, 0.0,  0.0, 0.0,  0.0, 0.0,  b,   a,
    ];
    Operator::from_real(8, &entries).expect("static shape")
}
