//! Two-point boundary problem for reduced geodesics: find `(p_x, p_y)` such that the
//! reduced flow at level μ carries `(x0, y0)` to `(x1, y1)` in time `T`.
//!
//! Damped Newton on the endpoint map, with the Jacobian taken from the linearized
//! leapfrog flow (two tangent columns seeded along `∂/∂p_x` and `∂/∂p_y`).

use thiserror::Error;

use crate::error::IntegrationError;
use crate::hamiltonian::CotangentState;
use crate::integrators::{integrate_full, IntegratorConfig, Leapfrog, Trajectory};
use crate::reduction::{Mu, ReducedState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingProblem {
    pub mu: Mu,
    pub start: [f64; 2],
    pub target: [f64; 2],
    pub horizon: f64,
    pub initial_guess: [f64; 2],
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Integration step of the shots.
    pub step: f64,
}

impl ShootingProblem {
    pub fn new(mu: Mu, start: [f64; 2], target: [f64; 2], horizon: f64) -> Self {
        ShootingProblem {
            mu,
            start,
            target,
            horizon,
            initial_guess: [0.0, 0.0],
            tolerance: 1e-10,
            max_iterations: 50,
            step: 1e-3,
        }
    }

    pub fn with_guess(mut self, guess: [f64; 2]) -> Self {
        self.initial_guess = guess;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// The problem mirrored through `(x, y) ↦ (y, x)`.
    pub fn reflected(&self) -> Self {
        let r = |a: [f64; 2]| [a[1], a[0]];
        let [a1, a2, a3, a4, a5, a6] = self.mu.0;
        ShootingProblem {
            mu: Mu([a3, a2, a1, a5, a4, a6]),
            start: r(self.start),
            target: r(self.target),
            initial_guess: r(self.initial_guess),
            ..*self
        }
    }

    fn validate(&self) -> Result<(), ShootingError> {
        let finite = |a: &[f64]| a.iter().all(|v| v.is_finite());
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(ShootingError::InvalidProblem("horizon must be finite and > 0"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ShootingError::InvalidProblem("tolerance must be finite and > 0"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(ShootingError::InvalidProblem("step must be finite and > 0"));
        }
        if !(finite(&self.mu.0)
            && finite(&self.start)
            && finite(&self.target)
            && finite(&self.initial_guess))
        {
            return Err(ShootingError::InvalidProblem("inputs must be finite"));
        }
        Ok(())
    }

    fn grid(&self) -> (usize, f64) {
        IntegratorConfig::leapfrog(self.step, self.horizon).grid()
    }

    fn initial_state(&self, p: [f64; 2]) -> ReducedState {
        ReducedState::new(self.start[0], self.start[1], p[0], p[1])
    }

    /// Endpoint residual `position(flow_T) − target` and its Jacobian in `(p_x, p_y)`.
    /// `None` when the shot leaves the representable range.
    pub fn endpoint_map(&self, p: [f64; 2]) -> Option<([f64; 2], [[f64; 2]; 2])> {
        let (n, h) = self.grid();
        let lf = Leapfrog::new(self.mu, h);
        let mut s = self.initial_state(p);
        let mut cols = [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        for _ in 0..n {
            lf.step_with_tangents(&mut s, &mut cols);
        }
        let f = [s.x - self.target[0], s.y - self.target[1]];
        let jac = [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]];
        let ok = s.is_finite() && cols.iter().flatten().all(|v| v.is_finite());
        ok.then_some((f, jac))
    }

    fn residual(&self, p: [f64; 2]) -> Option<f64> {
        let (n, h) = self.grid();
        let lf = Leapfrog::new(self.mu, h);
        let mut s = self.initial_state(p);
        for _ in 0..n {
            lf.step(&mut s);
        }
        s.is_finite()
            .then(|| (s.x - self.target[0]).hypot(s.y - self.target[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingIterate {
    pub iteration: usize,
    pub momenta: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub momenta: [f64; 2],
    pub residual: f64,
    /// Newton steps taken.
    pub iterations: usize,
    pub history: Vec<ShootingIterate>,
}

impl ShootingSolution {
    /// Lift the reduced geodesic to the group, starting at `(x0, y0, θ = 0)` with vertical
    /// momenta equal to μ.
    pub fn lift(
        &self,
        problem: &ShootingProblem,
        sample_stride: usize,
    ) -> Result<Trajectory<CotangentState>, IntegrationError<CotangentState>> {
        let s0 = CotangentState::from_reduced(&problem.initial_state(self.momenta), &problem.mu, [0.0; 6]);
        let cfg = IntegratorConfig::leapfrog(problem.step, problem.horizon).with_stride(sample_stride);
        integrate_full(&s0, &cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShootingError {
    #[error("invalid shooting problem: {0}")]
    InvalidProblem(&'static str),
    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    MaxIterations {
        iterations: usize,
        best: [f64; 2],
        residual: f64,
        history: Vec<ShootingIterate>,
    },
    #[error("shot escaped at iteration {iteration} even after step damping")]
    Escape {
        iteration: usize,
        momenta: [f64; 2],
        history: Vec<ShootingIterate>,
    },
    #[error("singular endpoint Jacobian at iteration {iteration}")]
    SingularJacobian {
        iteration: usize,
        momenta: [f64; 2],
        history: Vec<ShootingIterate>,
    },
}

const MAX_HALVINGS: usize = 40;

/// Damped Newton shooting. The full step is halved while it fails to reduce the residual.
pub fn shoot(problem: &ShootingProblem) -> Result<ShootingSolution, ShootingError> {
    problem.validate()?;
    let mut p = problem.initial_guess;
    let mut history = Vec::new();

    let Some((mut f, mut jac)) = problem.endpoint_map(p) else {
        return Err(ShootingError::Escape {
            iteration: 0,
            momenta: p,
            history,
        });
    };
    let mut res = f[0].hypot(f[1]);
    history.push(ShootingIterate {
        iteration: 0,
        momenta: p,
        residual: res,
    });

    let mut iteration = 0;
    while res >= problem.tolerance {
        if iteration >= problem.max_iterations {
            return Err(ShootingError::MaxIterations {
                iterations: iteration,
                best: p,
                residual: res,
                history,
            });
        }
        iteration += 1;
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let scale = jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(det.abs() > 1e-14 * scale * scale) {
            return Err(ShootingError::SingularJacobian {
                iteration,
                momenta: p,
                history,
            });
        }
        let dx = -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
        let dy = -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det;

        let mut lambda = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = [p[0] + lambda * dx, p[1] + lambda * dy];
            if let Some(r) = problem.residual(trial) {
                if r < res {
                    accepted = Some(trial);
                    break;
                }
                fallback.get_or_insert(trial);
            }
            lambda *= 0.5;
        }
        // Near convergence roundoff can stall the decrease test; take the finite full step.
        let Some(next) = accepted.or(fallback.filter(|_| res < 1e3 * problem.tolerance)) else {
            return Err(ShootingError::Escape {
                iteration,
                momenta: p,
                history,
            });
        };
        p = next;
        let Some((f_new, jac_new)) = problem.endpoint_map(p) else {
            return Err(ShootingError::Escape {
                iteration,
                momenta: p,
                history,
            });
        };
        f = f_new;
        jac = jac_new;
        res = f[0].hypot(f[1]);
        history.push(ShootingIterate {
            iteration,
            momenta: p,
            residual: res,
        });
    }

    Ok(ShootingSolution {
        momenta: p,
        residual: res,
        iterations: iteration,
        history,
    })
}
