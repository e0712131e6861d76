//! Maximal Lyapunov exponent by Benettin's renormalization method.

use thiserror::Error;

use crate::error::{ConfigError, IntegrationError};
use crate::integrators::{integrate_with_tangent, IntegratorConfig};
use crate::reduction::{Mu, ReducedState};

/// Tangent vector the estimate starts from: `(1, 1, 1, 1) / 2`, so it has components
/// along every position and momentum direction.
pub const INITIAL_TANGENT: [f64; 4] = [0.5, 0.5, 0.5, 0.5];

/// Plateau criterion: the running estimate stays within this relative band of its final
/// value over the last [`PLATEAU_FRACTION`] of the integration time.
pub const PLATEAU_REL_TOL: f64 = 0.01;
pub const PLATEAU_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    /// Maximal exponent, in inverse time units.
    pub mle: f64,
    /// `(time, running estimate)` after each renormalization.
    pub history: Vec<(f64, f64)>,
    pub renorm_interval: f64,
    pub converged: bool,
    /// State reached at the end of the run.
    pub final_state: ReducedState,
}

#[derive(Debug, Clone, Error)]
pub enum LyapunovError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("renorm_interval must be finite and > 0, got {0}")]
    RenormInterval(f64),
    #[error("trajectory escaped at t = {time}")]
    Escape {
        time: f64,
        partial: Box<LyapunovEstimate>,
    },
}

/// Whether the running estimate has settled (see [`PLATEAU_REL_TOL`]).
pub fn plateau_reached(history: &[(f64, f64)]) -> bool {
    let Some(&(t_end, last)) = history.last() else {
        return false;
    };
    if !(last > 0.0) {
        return false;
    }
    let cutoff = t_end * (1.0 - PLATEAU_FRACTION);
    history
        .iter()
        .filter(|(t, _)| *t >= cutoff)
        .all(|(_, v)| (v - last).abs() <= PLATEAU_REL_TOL * last)
}

/// Benettin's algorithm: co-integrate a tangent vector, rescale it to unit length every
/// `renorm_interval`, and average the logarithms of the stretch factors over the run.
pub fn lyapunov_mle(
    mu: &Mu,
    s0: &ReducedState,
    cfg: &IntegratorConfig,
    renorm_interval: f64,
) -> Result<LyapunovEstimate, LyapunovError> {
    cfg.validate()?;
    if !(renorm_interval.is_finite() && renorm_interval > 0.0) {
        return Err(LyapunovError::RenormInterval(renorm_interval));
    }
    if !s0.is_finite() {
        return Err(ConfigError::NonFinite {
            what: "initial state",
        }
        .into());
    }
    let chunks = ((cfg.t_final / renorm_interval).round() as usize).max(1);
    let chunk_cfg = IntegratorConfig {
        t_final: renorm_interval,
        sample_stride: usize::MAX,
        ..*cfg
    };

    let norm = |v: &[f64; 4]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut v = INITIAL_TANGENT;
    let n0 = norm(&v);
    v.iter_mut().for_each(|c| *c /= n0);

    let mut s = *s0;
    let mut log_sum = 0.0;
    let mut history = Vec::with_capacity(chunks);
    for i in 1..=chunks {
        let out = match integrate_with_tangent(mu, &s, &v, &chunk_cfg) {
            Ok(out) => out,
            Err(e) => {
                let time = (i - 1) as f64 * renorm_interval + e.escape_time().unwrap_or(0.0);
                if let IntegrationError::Config(c) = e {
                    return Err(c.into());
                }
                let mle = history.last().map_or(0.0, |h: &(f64, f64)| h.1);
                return Err(LyapunovError::Escape {
                    time,
                    partial: Box::new(LyapunovEstimate {
                        mle,
                        history,
                        renorm_interval,
                        converged: false,
                        final_state: s,
                    }),
                });
            }
        };
        s = *out.trajectory.last().expect("trajectory has samples");
        let w = *out.tangents.last().expect("tangent path has samples");
        let r = norm(&w);
        log_sum += r.ln();
        v = w.map(|c| c / r);
        let t = i as f64 * renorm_interval;
        history.push((t, log_sum / t));
    }

    let mle = history.last().map_or(0.0, |h| h.1);
    Ok(LyapunovEstimate {
        mle,
        converged: plateau_reached(&history),
        history,
        renorm_interval,
        final_state: s,
    })
}
