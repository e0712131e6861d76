//! Surface of section `Σ = {y = 0, p_y > 0}` for the reduced flow.

use rayon::prelude::*;
use thiserror::Error;

use crate::error::ConfigError;
use crate::integrators::{IntegratorConfig, Leapfrog};
use crate::reduction::{h_mu, phi, Mu, ReducedState};

/// Crossings are refined until `|y|` falls below this.
pub const CROSSING_TOLERANCE: f64 = 1e-10;
/// Seeds must satisfy `|H_μ(seed) − energy|` below this.
pub const SHELL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub x: f64,
    pub px: f64,
    /// Momentum `p_y` of the integrated state at the crossing.
    pub py: f64,
    pub crossing_time: f64,
    pub crossing_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedStatus {
    /// `max_crossings` points were collected.
    Complete,
    /// The time budget ran out first; some points were collected.
    TimeLimit,
    /// No crossing within `t_final`.
    NoCrossings,
    /// The trajectory became non-finite at the given time.
    Escaped { time: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedSection {
    pub seed_index: usize,
    pub points: Vec<SectionPoint>,
    pub status: SeedStatus,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("seed {seed_index} is off the energy shell (|H - E| = {residual:e})")]
    OffShell { seed_index: usize, residual: f64 },
}

/// Complete `(x, y, p_x)` to a state on the shell `H_μ = energy` with `p_y ≥ 0`.
pub fn seed_on_shell(mu: &Mu, energy: f64, x: f64, y: f64, px: f64) -> Option<ReducedState> {
    let py2 = 2.0 * energy - px * px - phi(mu, x, y);
    (py2 >= 0.0).then(|| ReducedState::new(x, y, px, py2.sqrt()))
}

/// `p_y ≥ 0` recovered from the shell at a section point, if the point is admissible.
pub fn shell_py(mu: &Mu, energy: f64, x: f64, px: f64) -> Option<f64> {
    seed_on_shell(mu, energy, x, 0.0, px).map(|s| s.py)
}

/// Collect up to `max_crossings` upward crossings of `y = 0` for each seed.
///
/// Seeds are integrated concurrently with the leapfrog scheme at `cfg.step` regardless of
/// `cfg.scheme`; results come back in seed order.
pub fn poincare_section(
    mu: &Mu,
    energy: f64,
    seeds: &[ReducedState],
    cfg: &IntegratorConfig,
    max_crossings: usize,
) -> Result<Vec<SeedSection>, SectionError> {
    poincare_section_with_tolerance(mu, energy, seeds, cfg, max_crossings, CROSSING_TOLERANCE)
}

/// As [`poincare_section`] with an explicit bound on `|y|` at refined crossings.
pub fn poincare_section_with_tolerance(
    mu: &Mu,
    energy: f64,
    seeds: &[ReducedState],
    cfg: &IntegratorConfig,
    max_crossings: usize,
    crossing_tolerance: f64,
) -> Result<Vec<SeedSection>, SectionError> {
    cfg.validate()?;
    if !(crossing_tolerance > 0.0 && crossing_tolerance.is_finite()) {
        return Err(ConfigError::NonFinite {
            what: "crossing tolerance (must be > 0)",
        }
        .into());
    }
    for (seed_index, s) in seeds.iter().enumerate() {
        let residual = (h_mu(mu, s) - energy).abs();
        if !(residual < SHELL_TOLERANCE) {
            return Err(SectionError::OffShell {
                seed_index,
                residual,
            });
        }
    }
    let (n, h) = cfg.grid();
    let lf = Leapfrog::new(*mu, h);
    Ok(seeds
        .par_iter()
        .enumerate()
        .map(|(seed_index, seed)| {
            trace_seed(&lf, seed_index, *seed, n, max_crossings, crossing_tolerance)
        })
        .collect())
}

fn trace_seed(
    lf: &Leapfrog,
    seed_index: usize,
    seed: ReducedState,
    n: usize,
    max_crossings: usize,
    tol: f64,
) -> SeedSection {
    let h = lf.step;
    let mut points = Vec::new();
    let mut s = seed;
    let mut status = None;
    for k in 1..=n {
        if points.len() >= max_crossings {
            status = Some(SeedStatus::Complete);
            break;
        }
        let prev = s;
        lf.step(&mut s);
        if !s.is_finite() {
            status = Some(SeedStatus::Escaped {
                time: (k - 1) as f64 * h,
            });
            break;
        }
        if prev.y < 0.0 && s.y >= 0.0 {
            let (tau, c) = refine_crossing(lf, &prev, h, tol);
            if c.py > 0.0 {
                points.push(SectionPoint {
                    x: c.x,
                    px: c.px,
                    py: c.py,
                    crossing_time: (k - 1) as f64 * h + tau,
                    crossing_index: points.len(),
                });
            }
        }
    }
    let status = status.unwrap_or(if points.len() >= max_crossings {
        SeedStatus::Complete
    } else if points.is_empty() {
        SeedStatus::NoCrossings
    } else {
        SeedStatus::TimeLimit
    });
    SeedSection {
        seed_index,
        points,
        status,
    }
}

/// Bisect on the length of a single leapfrog sub-step from `prev` (where `y < 0`) until
/// `|y| < tol`.
fn refine_crossing(lf: &Leapfrog, prev: &ReducedState, h: f64, tol: f64) -> (f64, ReducedState) {
    let advance = |tau: f64| {
        let mut s = *prev;
        lf.step_by(&mut s, tau);
        s
    };
    let (mut lo, mut hi) = (0.0, h);
    let mut best = (h, advance(h));
    for _ in 0..200 {
        if best.1.y.abs() < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = advance(mid);
        if s.y.abs() < best.1.y.abs() {
            best = (mid, s);
        }
        if s.y < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best
}
