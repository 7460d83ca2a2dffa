//! Classical Eulerian SPH solver for the 1-D advection equation.
//!
//! Particles sit on a fixed, uniformly spaced line and carry an advected
//! quantity `u`. One explicit step reads
//!
//! ```text
//! u_j(t + dt) = u_j(t) - c * dt * sum_k (u_k - u_j) * dx * grad_w(j, k)
//! ```
//!
//! with the sum running over all other particles and `grad_w` evaluated at
//! the pair distance; the kernel's compact support truncates the sum in
//! practice. This solver is the reference every quantum result in the crate
//! is checked against.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SphError {
    #[error("smoothing length must be positive, got {0}")]
    NonPositiveSmoothingLength(f64),
    #[error("advection speed must be non-negative, got {0}")]
    NegativeSpeed(f64),
    #[error("timestep must be positive, got {0}")]
    NonPositiveTimestep(f64),
    #[error("need at least two particles, got {0}")]
    TooFewParticles(usize),
    #[error("positions and values must have equal length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("positions must be strictly increasing and uniformly spaced (violated at index {0})")]
    NonUniformSpacing(usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("gradient indices must differ, got j = k = {0}")]
    SelfGradient(usize),
    #[error("particle index {0} out of range for line of {1}")]
    IndexOutOfRange(usize, usize),
}

/// Spacing uniformity tolerance for `ParticleLine` construction.
const SPACING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Triangular,
}

/// Smoothing kernel with support radius equal to the smoothing length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    kind: KernelKind,
    h: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, h: f64) -> Result<Self, SphError> {
        if h <= 0.0 || !h.is_finite() {
            return Err(SphError::NonPositiveSmoothingLength(h));
        }
        Ok(KernelSpec { kind, h })
    }

    pub fn triangular(h: f64) -> Result<Self, SphError> {
        Self::new(KernelKind::Triangular, h)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Kernel value: `1/h - |r|/h^2` inside the support, zero outside.
    pub fn w(&self, r: f64) -> f64 {
        match self.kind {
            KernelKind::Triangular => {
                if r.abs() < self.h {
                    1.0 / self.h - r.abs() / (self.h * self.h)
                } else {
                    0.0
                }
            }
        }
    }

    /// Kernel derivative dW/dr: `-sgn(r)/h^2` inside the support, zero
    /// outside. The value at r = 0 is taken as 0, which keeps the function
    /// odd; the self term is excluded from every sum anyway.
    pub fn dw(&self, r: f64) -> f64 {
        match self.kind {
            KernelKind::Triangular => {
                if r == 0.0 || r.abs() >= self.h {
                    0.0
                } else {
                    -r.signum() / (self.h * self.h)
                }
            }
        }
    }
}

/// Fixed 1-D particle field: uniformly spaced positions and advected values.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleLine {
    positions: Vec<f64>,
    spacing: f64,
    u: Vec<f64>,
}

impl ParticleLine {
    pub fn new(positions: Vec<f64>, u: Vec<f64>) -> Result<Self, SphError> {
        if positions.len() < 2 {
            return Err(SphError::TooFewParticles(positions.len()));
        }
        if positions.len() != u.len() {
            return Err(SphError::LengthMismatch(positions.len(), u.len()));
        }
        if let Some(i) = positions.iter().position(|x| !x.is_finite()) {
            return Err(SphError::NonFinite(i));
        }
        if let Some(i) = u.iter().position(|x| !x.is_finite()) {
            return Err(SphError::NonFinite(i));
        }
        let spacing = positions[1] - positions[0];
        if spacing <= 0.0 {
            return Err(SphError::NonUniformSpacing(1));
        }
        for j in 1..positions.len() {
            let step = positions[j] - positions[j - 1];
            if (step - spacing).abs() > SPACING_TOL {
                return Err(SphError::NonUniformSpacing(j));
            }
        }
        Ok(ParticleLine {
            positions,
            spacing,
            u,
        })
    }

    /// Particles at `start + j * spacing` carrying the given values.
    pub fn uniform(start: f64, spacing: f64, u: Vec<f64>) -> Result<Self, SphError> {
        let positions = (0..u.len()).map(|j| start + j as f64 * spacing).collect();
        Self::new(positions, u)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Same positions, new values.
    pub fn with_u(&self, u: Vec<f64>) -> Result<Self, SphError> {
        if u.len() != self.positions.len() {
            return Err(SphError::LengthMismatch(self.positions.len(), u.len()));
        }
        if let Some(i) = u.iter().position(|x| !x.is_finite()) {
            return Err(SphError::NonFinite(i));
        }
        Ok(ParticleLine {
            positions: self.positions.clone(),
            spacing: self.spacing,
            u,
        })
    }
}

/// Advection speed, timestep and kernel for one solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvectionParams {
    pub c: f64,
    pub dt: f64,
    pub kernel: KernelSpec,
}

impl AdvectionParams {
    pub fn new(c: f64, dt: f64, kernel: KernelSpec) -> Result<Self, SphError> {
        if c < 0.0 || !c.is_finite() {
            return Err(SphError::NegativeSpeed(c));
        }
        if dt <= 0.0 || !dt.is_finite() {
            return Err(SphError::NonPositiveTimestep(dt));
        }
        Ok(AdvectionParams { c, dt, kernel })
    }

    /// Unit timestep, the convention used by the quantum-walk mapping.
    pub fn unit_dt(c: f64, kernel: KernelSpec) -> Result<Self, SphError> {
        Self::new(c, 1.0, kernel)
    }
}

/// Kernel gradient term for the pair (j, k), evaluated at the pair distance.
///
/// The sign is fixed by the right-hand-neighbor case: with particle 1 to the
/// right of particle 0 and spacing below the support, `grad_w(0, 1) = -1/h^2`.
/// Both orientations of a pair see the same value, which is what makes the
/// two-particle update symmetric in the particles and the total of `u`
/// conserved; an orientation-dependent sign would break both.
pub fn grad_w(
    j: usize,
    k: usize,
    line: &ParticleLine,
    kernel: &KernelSpec,
) -> Result<f64, SphError> {
    if j == k {
        return Err(SphError::SelfGradient(j));
    }
    let n = line.len();
    if j >= n {
        return Err(SphError::IndexOutOfRange(j, n));
    }
    if k >= n {
        return Err(SphError::IndexOutOfRange(k, n));
    }
    Ok(kernel.dw((line.positions()[k] - line.positions()[j]).abs()))
}

/// One explicit advection step; positions stay fixed.
pub fn classical_step(line: &ParticleLine, params: &AdvectionParams) -> ParticleLine {
    let u = line.u();
    let dx = line.spacing();
    let mut next = Vec::with_capacity(u.len());
    for j in 0..u.len() {
        let mut sum = 0.0;
        for k in 0..u.len() {
            if k == j {
                continue;
            }
            let grad = params
                .kernel
                .dw((line.positions()[k] - line.positions()[j]).abs());
            sum += (u[k] - u[j]) * dx * grad;
        }
        next.push(u[j] - params.c * params.dt * sum);
    }
    ParticleLine {
        positions: line.positions.clone(),
        spacing: line.spacing,
        u: next,
    }
}

/// All snapshots from t = 0 through t = `steps`, initial state included.
pub fn classical_evolve(
    line: &ParticleLine,
    params: &AdvectionParams,
    steps: usize,
) -> Vec<ParticleLine> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(line.clone());
    for _ in 0..steps {
        let next = classical_step(out.last().expect("nonempty"), params);
        out.push(next);
    }
    out
}

/// Largest advection speed admitted by the CFL condition, `dx/dt`.
pub fn cfl_max_c(dx: f64, dt: f64) -> f64 {
    dx / dt
}

/// Advection speed at which both two-particle solutions meet the mean:
/// `h^2 / (2 dt dx)` while the spacing is inside the support, undefined
/// otherwise.
pub fn crossover_c(h: f64, dx: f64, dt: f64) -> Option<f64> {
    if dx < h {
        Some(h * h / (2.0 * dt * dx))
    } else {
        None
    }
}

/// Particle spacing at which the two-particle solutions cross:
/// `h^2 / (2 c dt)` when that value lies inside the support, undefined
/// otherwise.
pub fn crossover_dx(h: f64, c: f64, dt: f64) -> Option<f64> {
    let dx = h * h / (2.0 * c * dt);
    if dx < h {
        Some(dx)
    } else {
        None
    }
}
