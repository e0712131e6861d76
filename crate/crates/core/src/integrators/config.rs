use crate::error::ConfigError;

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Kick–drift–kick Störmer–Verlet. Symplectic, time-reversible, second order.
    #[default]
    Leapfrog,
    /// Adaptive Dormand–Prince 5(4). Used as a reference, not for production runs.
    EmbeddedRk,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    /// Relative and absolute local error target of the reference scheme.
    pub rk_tolerance: f64,
    /// Record every `sample_stride`-th step (the final step is always recorded).
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            t_final: 10.0,
            scheme: Scheme::Leapfrog,
            rk_tolerance: 1e-10,
            sample_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn leapfrog(step: f64, t_final: f64) -> Self {
        IntegratorConfig {
            step,
            t_final,
            ..Default::default()
        }
    }

    pub fn reference(rk_tolerance: f64, step: f64, t_final: f64) -> Self {
        IntegratorConfig {
            step,
            t_final,
            scheme: Scheme::EmbeddedRk,
            rk_tolerance,
            sample_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(ConfigError::Step(self.step));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(ConfigError::FinalTime(self.t_final));
        }
        if !(self.rk_tolerance > 0.0 && self.rk_tolerance <= 1e-3) {
            return Err(ConfigError::RkTolerance(self.rk_tolerance));
        }
        if self.sample_stride == 0 {
            return Err(ConfigError::SampleStride);
        }
        Ok(())
    }

    /// Number of steps and the uniform step actually used. When `t_final` is not an
    /// integer multiple of `step`, the step is shrunk so the grid ends exactly at `t_final`.
    pub fn grid(&self) -> (usize, f64) {
        let ratio = self.t_final / self.step;
        let nearest = ratio.round();
        let n = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest
        } else {
            ratio.ceil()
        };
        let n = (n as usize).max(1);
        (n, self.t_final / n as f64)
    }
}
