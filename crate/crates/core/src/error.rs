use std::fmt;

use thiserror::Error;

use crate::integrators::Trajectory;

/// Invalid integrator settings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("step must be finite and > 0, got {0}")]
    Step(f64),
    #[error("t_final must be finite and > 0, got {0}")]
    FinalTime(f64),
    #[error("rk_tolerance must lie in (0, 1e-3], got {0}")]
    RkTolerance(f64),
    #[error("sample_stride must be >= 1")]
    SampleStride,
    #[error("{what} must be finite")]
    NonFinite { what: &'static str },
}

/// The flow left the representable range. Carries the samples recorded before the escape.
#[derive(Debug, Clone)]
pub struct Escape<S> {
    pub time: f64,
    pub last_finite: S,
    pub partial: Trajectory<S>,
}

#[derive(Debug, Clone, Error)]
pub enum IntegrationError<S: fmt::Debug> {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("trajectory escaped (non-finite state) at t = {}", .0.time)]
    Escape(Box<Escape<S>>),
    #[error("tangent vector overflowed at t = {time}; renormalize more often")]
    TangentOverflow { time: f64 },
    #[error("adaptive reference integrator failed at t = {time}: step size underflow")]
    StepUnderflow { time: f64 },
}

impl<S: fmt::Debug> IntegrationError<S> {
    pub fn escape_time(&self) -> Option<f64> {
        match self {
            IntegrationError::Escape(e) => Some(e.time),
            IntegrationError::TangentOverflow { time } | IntegrationError::StepUnderflow { time } => {
                Some(*time)
            }
            IntegrationError::Config(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructionError {
    #[error("trajectory has no samples")]
    Empty,
    #[error("trajectory has {times} times but {states} states")]
    LengthMismatch { times: usize, states: usize },
    #[error("sample times are not strictly increasing at index {index}")]
    NonMonotoneTime { index: usize },
    #[error("sample times are not uniformly spaced at index {index}")]
    NonUniformStep { index: usize },
    #[error("quadrature not resolved: step doubling changes the result by {delta:e}")]
    QuadratureUnresolved { delta: f64 },
}
