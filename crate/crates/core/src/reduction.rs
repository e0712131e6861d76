//! The reduced two-degree-of-freedom Hamiltonian `H_μ = ½(p_x² + p_y² + φ_μ(x, y))` on
//! `T*ℋ ≅ ℝ⁴`, and reconstruction of the vertical θ-motion by quadrature.

use crate::carnot::alpha_at;
use crate::error::ReconstructionError;
use crate::integrators::Trajectory;
use crate::quadrature::cumulative_simpson;

/// A momentum-map level `μ = (a1, …, a6) ∈ 𝔞*`, over the dual basis of
/// `(Y20, Y11, Y02, Y10, Y01, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mu(pub [f64; 6]);

impl Mu {
    pub const ZERO: Mu = Mu([0.0; 6]);

    /// `μ = (0, 0, 0, 0, 0, a)`: homogeneous quartic potential `a²(¼x⁴ + x²y² + ¼y⁴)`.
    pub fn quartic(a: f64) -> Mu {
        Mu([0.0, 0.0, 0.0, 0.0, 0.0, a])
    }

    /// `μ = (0, 0, 0, c, 0, 0)`: isotropic harmonic potential `c²(x² + y²)`.
    pub fn harmonic(c: f64) -> Mu {
        Mu([0.0, 0.0, 0.0, c, 0.0, 0.0])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// True when φ_μ is invariant under rotations of the plane, so that the angular
    /// momentum `x p_y − y p_x` is conserved. This holds iff only `a4` may be nonzero.
    pub fn is_rotationally_symmetric(&self) -> bool {
        let [a1, a2, a3, _, a5, a6] = self.0;
        a1 == 0.0 && a2 == 0.0 && a3 == 0.0 && a5 == 0.0 && a6 == 0.0
    }

    /// True when φ_μ is symmetric under `(x, y) ↦ (y, x)`.
    pub fn is_reflection_symmetric(&self) -> bool {
        let [a1, _, a3, a4, a5, _] = self.0;
        a1 == a3 && a4 == a5
    }
}

/// A point `(x, y, p_x, p_y)` of the reduced phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl ReducedState {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        ReducedState { x, y, px, py }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.y, self.px, self.py]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        ReducedState::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn angular_momentum(&self) -> f64 {
        self.x * self.py - self.y * self.px
    }

    /// Image under the reflection `(x, y) ↦ (y, x)`.
    pub fn reflected(&self) -> ReducedState {
        ReducedState::new(self.y, self.x, self.py, self.px)
    }
}

/// The three polynomials whose squares sum to φ_μ, i.e. `α(x, y)` contracted with μ.
/// Along the flow these are the momentum functions `(P20, P11, P02)`.
#[inline]
pub fn vertical_momenta(mu: &Mu, x: f64, y: f64) -> [f64; 3] {
    let [a1, a2, a3, a4, a5, a6] = mu.0;
    [
        a1 + a4 * x + 0.5 * a6 * x * x,
        a2 + a5 * x + a4 * y + a6 * x * y,
        a3 + a5 * y + 0.5 * a6 * y * y,
    ]
}

/// `φ_μ(x, y) = (a1 + a4 x + a6 x²/2)² + (a2 + a5 x + a4 y + a6 xy)² + (a3 + a5 y + a6 y²/2)²`.
pub fn phi(mu: &Mu, x: f64, y: f64) -> f64 {
    let [a, b, c] = vertical_momenta(mu, x, y);
    a * a + b * b + c * c
}

/// Exact gradient of φ_μ.
#[inline]
pub fn phi_grad(mu: &Mu, x: f64, y: f64) -> [f64; 2] {
    let [_, _, _, a4, a5, a6] = mu.0;
    let [a, b, c] = vertical_momenta(mu, x, y);
    let ax = a4 + a6 * x;
    let bx = a5 + a6 * y;
    let by = a4 + a6 * x;
    let cy = a5 + a6 * y;
    [2.0 * (a * ax + b * bx), 2.0 * (b * by + c * cy)]
}

/// Exact Hessian of φ_μ (symmetric).
#[inline]
pub fn phi_hess(mu: &Mu, x: f64, y: f64) -> [[f64; 2]; 2] {
    let [_, _, _, a4, a5, a6] = mu.0;
    let [a, b, c] = vertical_momenta(mu, x, y);
    let ax = a4 + a6 * x;
    let bx = a5 + a6 * y;
    let by = a4 + a6 * x;
    let cy = a5 + a6 * y;
    let xx = 2.0 * (ax * ax + a * a6 + bx * bx);
    let xy = 2.0 * (bx * by + b * a6);
    let yy = 2.0 * (by * by + cy * cy + c * a6);
    [[xx, xy], [xy, yy]]
}

/// `H_μ = ½(p_x² + p_y² + φ_μ(x, y))`.
pub fn h_mu(mu: &Mu, s: &ReducedState) -> f64 {
    0.5 * (s.px * s.px + s.py * s.py + phi(mu, s.x, s.y))
}

/// Hamilton's equations of `H_μ`: `(p_x, p_y, −½ ∂φ/∂x, −½ ∂φ/∂y)`.
pub fn reduced_vector_field(mu: &Mu, s: &ReducedState) -> [f64; 4] {
    let [gx, gy] = phi_grad(mu, s.x, s.y);
    [s.px, s.py, -0.5 * gx, -0.5 * gy]
}

/// Jacobian of [`reduced_vector_field`] with respect to `(x, y, p_x, p_y)`.
pub fn reduced_jacobian(mu: &Mu, s: &ReducedState) -> [[f64; 4]; 4] {
    let [[hxx, hxy], [_, hyy]] = phi_hess(mu, s.x, s.y);
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-0.5 * hxx, -0.5 * hxy, 0.0, 0.0],
        [-0.5 * hxy, -0.5 * hyy, 0.0, 0.0],
    ]
}

/// θ-velocities induced by α along a reduced trajectory at level μ:
/// `θ̇ = αᵀ(x, y) (P20, P11, P02)`.
pub fn theta_velocity(mu: &Mu, x: f64, y: f64) -> [f64; 6] {
    alpha_at(x, y).transpose_apply(&vertical_momenta(mu, x, y))
}

/// Threshold on the step-doubling difference of the vertical quadrature.
pub const QUADRATURE_REFINEMENT_TOL: f64 = 1e-8;

/// Vertical θ-path lifted from a reduced trajectory, with `θ(t0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalPath {
    pub times: Vec<f64>,
    pub theta: Vec<[f64; 6]>,
    /// Sup-norm difference between the quadrature on the sample grid and on the grid
    /// with every other sample dropped. Zero when fewer than five samples are given.
    pub refinement_delta: f64,
}

/// Reconstruct the six θ-coordinates along a sampled reduced trajectory by composite
/// Simpson quadrature of `θ̇ = αᵀ(x, y) α(x, y) μ`.
///
/// Samples must be strictly increasing and uniformly spaced. The result is rejected when
/// halving the quadrature resolution moves it by more than [`QUADRATURE_REFINEMENT_TOL`].
pub fn reconstruct_vertical(
    mu: &Mu,
    trajectory: &Trajectory<ReducedState>,
) -> Result<VerticalPath, ReconstructionError> {
    let times = &trajectory.times;
    if times.is_empty() {
        return Err(ReconstructionError::Empty);
    }
    if times.len() != trajectory.states.len() {
        return Err(ReconstructionError::LengthMismatch {
            times: times.len(),
            states: trajectory.states.len(),
        });
    }
    let step = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    for (i, w) in times.windows(2).enumerate() {
        let dt = w[1] - w[0];
        if !(dt > 0.0) {
            return Err(ReconstructionError::NonMonotoneTime { index: i + 1 });
        }
        if (dt - step).abs() > 1e-9 * step.abs().max(w[1].abs()) {
            return Err(ReconstructionError::NonUniformStep { index: i + 1 });
        }
    }
    let step = if times.len() > 1 {
        (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64
    } else {
        0.0
    };

    let rates: Vec<[f64; 6]> = trajectory
        .states
        .iter()
        .map(|s| theta_velocity(mu, s.x, s.y))
        .collect();
    let theta = cumulative_simpson(step, &rates);

    let mut refinement_delta = 0.0;
    if rates.len() >= 5 {
        let coarse_rates: Vec<[f64; 6]> = rates.iter().step_by(2).copied().collect();
        let coarse = cumulative_simpson(2.0 * step, &coarse_rates);
        for (c, f) in coarse.iter().zip(theta.iter().step_by(2)) {
            for k in 0..6 {
                refinement_delta = f64::max(refinement_delta, (c[k] - f[k]).abs());
            }
        }
    }
    if refinement_delta > QUADRATURE_REFINEMENT_TOL {
        return Err(ReconstructionError::QuadratureUnresolved {
            delta: refinement_delta,
        });
    }

    Ok(VerticalPath {
        times: times.clone(),
        theta,
        refinement_delta,
    })
}
