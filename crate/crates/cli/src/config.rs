//! Experiment configuration, read from a single TOML file.

use std::fmt;

use jetflow::integrators::{IntegratorConfig, Scheme};
use jetflow::{CotangentState, Mu, ReducedState};
use serde::{Deserialize, Serialize};

/// A configuration problem, naming the offending key path.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for FieldError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Momentum-map level `(a1, …, a6)`.
    pub mu: [f64; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConditions>,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shoot: Option<ShootSettings>,
    #[serde(default)]
    pub output: OutputSettings,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditions {
    /// `(x, y, p_x, p_y)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<[f64; 4]>,
    /// `(x, y, θ1…θ6, p_x, p_y, p1…p6)`. The last six entries override `mu`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeTag {
    #[default]
    Leapfrog,
    Rk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSettings {
    pub step: f64,
    pub t_final: f64,
    pub scheme: SchemeTag,
    pub rk_tolerance: f64,
    pub sample_stride: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        IntegratorSettings {
            step: d.step,
            t_final: d.t_final,
            scheme: SchemeTag::Leapfrog,
            rk_tolerance: d.rk_tolerance,
            sample_stride: d.sample_stride,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    /// Section seeds as `[x, y, p_x, p_y]`, or `[x, y, p_x]` with `p_y ≥ 0` taken from
    /// the energy shell.
    #[serde(default)]
    pub seeds: Vec<Vec<f64>>,
    #[serde(default = "default_max_crossings")]
    pub max_crossings: usize,
    #[serde(default = "default_section_tolerance")]
    pub section_tolerance: f64,
    #[serde(default = "default_renorm_interval")]
    pub renorm_interval: f64,
}

fn default_max_crossings() -> usize {
    200
}
fn default_section_tolerance() -> f64 {
    jetflow::analysis::CROSSING_TOLERANCE
}
fn default_renorm_interval() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShootSettings {
    pub start: [f64; 2],
    pub target: [f64; 2],
    pub horizon: f64,
    #[serde(default)]
    pub initial_guess: [f64; 2],
    #[serde(default = "default_shoot_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_shoot_tolerance() -> f64 {
    1e-10
}
fn default_max_iterations() -> usize {
    50
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

/// Initial data after validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Reduced(ReducedState),
    Full(CotangentState),
}

fn finite(field: &str, values: &[f64]) -> Result<(), FieldError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(FieldError::new(format!("{field}[{i}]"), "must be finite")),
        None => Ok(()),
    }
}

fn positive(field: &str, v: f64) -> Result<(), FieldError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("must be finite and > 0 (got {v})")))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| FieldError::new("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Checks shared by every subcommand.
    pub fn validate(&self) -> Result<(), FieldError> {
        finite("mu", &self.mu)?;
        let i = &self.integrator;
        positive("integrator.step", i.step)?;
        positive("integrator.t_final", i.t_final)?;
        if !(i.rk_tolerance > 0.0 && i.rk_tolerance <= 1e-3) {
            return Err(FieldError::new(
                "integrator.rk_tolerance",
                format!("must lie in (0, 1e-3] (got {})", i.rk_tolerance),
            ));
        }
        if i.sample_stride == 0 {
            return Err(FieldError::new("integrator.sample_stride", "must be >= 1"));
        }
        if let Some(init) = &self.initial {
            match (&init.reduced, &init.full) {
                (Some(r), None) => finite("initial.reduced", r)?,
                (None, Some(f)) => {
                    if f.len() != 16 {
                        return Err(FieldError::new(
                            "initial.full",
                            format!("expected 16 values, got {}", f.len()),
                        ));
                    }
                    finite("initial.full", f)?;
                }
                _ => {
                    return Err(FieldError::new(
                        "initial",
                        "exactly one of `reduced` or `full` must be given",
                    ))
                }
            }
        }
        if let Some(a) = &self.analysis {
            if let Some(e) = a.energy {
                finite("analysis.energy", &[e])?;
            }
            for (k, s) in a.seeds.iter().enumerate() {
                let field = format!("analysis.seeds[{k}]");
                if !(s.len() == 3 || s.len() == 4) {
                    return Err(FieldError::new(field, "expected [x, y, p_x] or [x, y, p_x, p_y]"));
                }
                finite(&field, s)?;
            }
            positive("analysis.section_tolerance", a.section_tolerance)?;
            positive("analysis.renorm_interval", a.renorm_interval)?;
        }
        if let Some(s) = &self.shoot {
            finite("shoot.start", &s.start)?;
            finite("shoot.target", &s.target)?;
            finite("shoot.initial_guess", &s.initial_guess)?;
            positive("shoot.horizon", s.horizon)?;
            positive("shoot.tolerance", s.tolerance)?;
        }
        Ok(())
    }

    pub fn mu(&self) -> Mu {
        Mu(self.mu)
    }

    pub fn integrator_config(&self) -> IntegratorConfig {
        let i = &self.integrator;
        IntegratorConfig {
            step: i.step,
            t_final: i.t_final,
            scheme: match i.scheme {
                SchemeTag::Leapfrog => Scheme::Leapfrog,
                SchemeTag::Rk => Scheme::EmbeddedRk,
            },
            rk_tolerance: i.rk_tolerance,
            sample_stride: i.sample_stride,
        }
    }

    pub fn initial(&self) -> Result<Initial, FieldError> {
        let init = self
            .initial
            .as_ref()
            .ok_or_else(|| FieldError::new("initial", "missing (this command needs initial data)"))?;
        Ok(match (&init.reduced, &init.full) {
            (Some(r), _) => Initial::Reduced(ReducedState::from_array(*r)),
            (None, Some(f)) => {
                let mut a = [0.0; 16];
                a.copy_from_slice(f);
                Initial::Full(CotangentState::from_array(a))
            }
            (None, None) => return Err(FieldError::new("initial", "no initial data")),
        })
    }

    pub fn analysis(&self) -> Result<&AnalysisSettings, FieldError> {
        self.analysis
            .as_ref()
            .ok_or_else(|| FieldError::new("analysis", "missing (this command needs an [analysis] table)"))
    }

    pub fn shoot(&self) -> Result<&ShootSettings, FieldError> {
        self.shoot
            .as_ref()
            .ok_or_else(|| FieldError::new("shoot", "missing (this command needs a [shoot] table)"))
    }
}

/// Prefix of the metadata lines that echo the effective configuration.
pub const CONFIG_PREFIX: &str = "# config: ";

/// Recover the configuration echoed into an output file's metadata block.
pub fn config_from_output(text: &str) -> Result<ExperimentConfig, FieldError> {
    let body: String = text
        .lines()
        .filter_map(|l| l.strip_prefix(CONFIG_PREFIX).or_else(|| (l == CONFIG_PREFIX.trim_end()).then_some("")))
        .map(|l| format!("{l}\n"))
        .collect();
    ExperimentConfig::parse(&body)
}
