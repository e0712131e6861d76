//! Time-steppers for the reduced (4-dim), full (16-dim) and tangent flows.
//!
//! Production runs use kick–drift–kick leapfrog on the reduced system. The full flow
//! reuses that exact code path for `(x, y, p_x, p_y)`, holds `p1…p6` fixed and integrates
//! the θ-block by composite Simpson on the step grid. The adaptive Dormand–Prince
//! scheme integrates the same equations directly and serves as a cross-check.

mod config;
mod leapfrog;
mod rk;
mod trajectory;

pub use config::{IntegratorConfig, Scheme};
pub use leapfrog::Leapfrog;
pub use rk::DormandPrince;
pub use trajectory::{Diagnostics, PhaseState, Trajectory};

use crate::error::{ConfigError, Escape, IntegrationError};
use crate::hamiltonian::{full_vector_field, momentum_map, CotangentState};
use crate::quadrature::SimpsonAccumulator;
use crate::reduction::{reduced_jacobian, reduced_vector_field, theta_velocity, Mu, ReducedState};

/// Tangent vectors are reported as overflowed beyond this norm.
pub const TANGENT_OVERFLOW: f64 = 1e150;

fn is_sample(k: usize, n: usize, stride: usize) -> bool {
    k.is_multiple_of(stride) || k == n
}

fn escape<S: PhaseState>(time: f64, last_finite: S, partial: Trajectory<S>) -> IntegrationError<S> {
    IntegrationError::Escape(Box::new(Escape {
        time,
        last_finite,
        partial,
    }))
}

fn check_inputs<S: std::fmt::Debug>(
    cfg: &IntegratorConfig,
    mu: &Mu,
    finite_state: bool,
) -> Result<(), IntegrationError<S>> {
    cfg.validate()?;
    if !mu.is_finite() {
        return Err(ConfigError::NonFinite { what: "mu" }.into());
    }
    if !finite_state {
        return Err(ConfigError::NonFinite {
            what: "initial state",
        }
        .into());
    }
    Ok(())
}

/// Integrate the reduced Hamiltonian `H_μ` from `s0`.
pub fn integrate_reduced(
    mu: &Mu,
    s0: &ReducedState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<ReducedState>, IntegrationError<ReducedState>> {
    check_inputs(cfg, mu, s0.is_finite())?;
    let (n, h) = cfg.grid();
    let stride = cfg.sample_stride;
    let mut traj = Trajectory::with_mu(*mu);
    traj.push(0.0, *s0);

    match cfg.scheme {
        Scheme::Leapfrog => {
            let lf = Leapfrog::new(*mu, h);
            let mut s = *s0;
            for k in 1..=n {
                let prev = s;
                lf.step(&mut s);
                if !s.is_finite() {
                    return Err(escape((k - 1) as f64 * h, prev, traj));
                }
                if is_sample(k, n, stride) {
                    traj.push(k as f64 * h, s);
                }
            }
        }
        Scheme::EmbeddedRk => {
            let mut dp = DormandPrince::new(cfg.rk_tolerance, h);
            let field = |y: &[f64; 4]| reduced_vector_field(mu, &ReducedState::from_array(*y));
            let mut y = s0.to_array();
            let mut k_prev = 0;
            for k in (1..=n).filter(|&k| is_sample(k, n, stride)) {
                let span = (k - k_prev) as f64 * h;
                match dp.advance(&field, y, span) {
                    Ok(next) => y = next,
                    Err(dt) => {
                        let t = k_prev as f64 * h + dt;
                        let last = ReducedState::from_array(y);
                        return Err(escape(t, last, traj));
                    }
                }
                traj.push(k as f64 * h, ReducedState::from_array(y));
                k_prev = k;
            }
        }
    }
    Ok(traj)
}

/// Integrate the full geodesic flow of `H_sR` from `s0`.
pub fn integrate_full(
    s0: &CotangentState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<CotangentState>, IntegrationError<CotangentState>> {
    let mu = momentum_map(s0);
    check_inputs(cfg, &mu, s0.is_finite())?;
    let (n, h) = cfg.grid();
    let stride = cfg.sample_stride;
    let mut traj = Trajectory::with_mu(mu);

    match cfg.scheme {
        Scheme::Leapfrog => {
            let lf = Leapfrog::new(mu, h);
            let lift = |k: usize, red: &ReducedState, theta: [f64; 6]| {
                let mut full = CotangentState::from_reduced(red, &mu, theta);
                full.p_theta = s0.p_theta;
                (k as f64 * h, full)
            };
            let mut acc = SimpsonAccumulator::new(h, s0.base.theta);
            let mut s = s0.reduced();
            for (idx, theta) in acc.push(theta_velocity(&mu, s.x, s.y)).into_iter().flatten() {
                debug_assert_eq!(idx, 0);
                let (t, full) = lift(idx, &s, theta);
                traj.push(t, full);
            }
            for k in 1..=n {
                let before = s;
                lf.step(&mut s);
                if !s.is_finite() {
                    // Samples up to k - 2 are final; k - 1 may still be pending.
                    let last = CotangentState::from_reduced(&before, &mu, [f64::NAN; 6]);
                    return Err(escape((k - 1) as f64 * h, last, traj));
                }
                for (idx, theta) in acc.push(theta_velocity(&mu, s.x, s.y)).into_iter().flatten() {
                    if is_sample(idx, n, stride) {
                        let red = if idx == k { s } else { before };
                        let (t, full) = lift(idx, &red, theta);
                        traj.push(t, full);
                    }
                }
            }
            if let Some((idx, theta)) = acc.finish() {
                let (t, full) = lift(idx, &s, theta);
                traj.push(t, full);
            }
        }
        Scheme::EmbeddedRk => {
            let mut dp = DormandPrince::new(cfg.rk_tolerance, h);
            let field = |y: &[f64; 16]| full_vector_field(&CotangentState::from_array(*y));
            let mut y = s0.to_array();
            traj.push(0.0, *s0);
            let mut k_prev = 0;
            for k in (1..=n).filter(|&k| is_sample(k, n, stride)) {
                let span = (k - k_prev) as f64 * h;
                match dp.advance(&field, y, span) {
                    Ok(next) => y = next,
                    Err(dt) => {
                        let t = k_prev as f64 * h + dt;
                        return Err(escape(t, CotangentState::from_array(y), traj));
                    }
                }
                traj.push(k as f64 * h, CotangentState::from_array(y));
                k_prev = k;
            }
        }
    }
    Ok(traj)
}

/// Reduced trajectory together with its linearized flow, sampled on the same grid.
#[derive(Debug, Clone)]
pub struct TangentTrajectory {
    pub trajectory: Trajectory<ReducedState>,
    pub tangents: Vec<[f64; 4]>,
}

/// Co-evolve the reduced flow and the variational equation `v̇ = Df(s) v`.
///
/// With the leapfrog scheme the tangent is propagated by the exact derivative of the
/// discrete step map, so it is the derivative of the numerical flow itself.
pub fn integrate_with_tangent(
    mu: &Mu,
    s0: &ReducedState,
    v0: &[f64; 4],
    cfg: &IntegratorConfig,
) -> Result<TangentTrajectory, IntegrationError<ReducedState>> {
    check_inputs(cfg, mu, s0.is_finite() && v0.iter().all(|v| v.is_finite()))?;
    if v0.iter().all(|&v| v == 0.0) {
        return Err(ConfigError::NonFinite {
            what: "initial tangent (must be nonzero)",
        }
        .into());
    }
    let (n, h) = cfg.grid();
    let stride = cfg.sample_stride;
    let mut traj = Trajectory::with_mu(*mu);
    let mut tangents = vec![*v0];
    traj.push(0.0, *s0);
    let overflowed = |v: &[f64; 4]| !(v.iter().map(|c| c * c).sum::<f64>().sqrt() < TANGENT_OVERFLOW);

    match cfg.scheme {
        Scheme::Leapfrog => {
            let lf = Leapfrog::new(*mu, h);
            let mut s = *s0;
            let mut v = *v0;
            for k in 1..=n {
                let prev = s;
                lf.step_with_tangent(&mut s, &mut v);
                if !s.is_finite() {
                    return Err(escape((k - 1) as f64 * h, prev, traj));
                }
                if overflowed(&v) {
                    return Err(IntegrationError::TangentOverflow { time: k as f64 * h });
                }
                if is_sample(k, n, stride) {
                    traj.push(k as f64 * h, s);
                    tangents.push(v);
                }
            }
        }
        Scheme::EmbeddedRk => {
            let mut dp = DormandPrince::new(cfg.rk_tolerance, h);
            let field = |y: &[f64; 8]| {
                let s = ReducedState::new(y[0], y[1], y[2], y[3]);
                let f = reduced_vector_field(mu, &s);
                let jac = reduced_jacobian(mu, &s);
                let mut out = [0.0; 8];
                out[..4].copy_from_slice(&f);
                for i in 0..4 {
                    out[4 + i] = (0..4).map(|j| jac[i][j] * y[4 + j]).sum();
                }
                out
            };
            let mut y = [0.0; 8];
            y[..4].copy_from_slice(&s0.to_array());
            y[4..].copy_from_slice(v0);
            let mut k_prev = 0;
            for k in (1..=n).filter(|&k| is_sample(k, n, stride)) {
                let span = (k - k_prev) as f64 * h;
                match dp.advance(&field, y, span) {
                    Ok(next) => y = next,
                    Err(dt) => {
                        let t = k_prev as f64 * h + dt;
                        let last = ReducedState::new(y[0], y[1], y[2], y[3]);
                        return Err(escape(t, last, traj));
                    }
                }
                let v = [y[4], y[5], y[6], y[7]];
                if overflowed(&v) {
                    return Err(IntegrationError::TangentOverflow { time: k as f64 * h });
                }
                traj.push(k as f64 * h, ReducedState::new(y[0], y[1], y[2], y[3]));
                tangents.push(v);
                k_prev = k;
            }
        }
    }
    Ok(TangentTrajectory {
        trajectory: traj,
        tangents,
    })
}
