//! Subcommand drivers. Each builds an [`Artifact`] and reports how the run ended.

use jetflow::analysis::{
    conservation_report, lyapunov_mle, poincare_section_with_tolerance, seed_on_shell, LyapunovError,
    SectionError, SeedStatus,
};
use jetflow::bvp::{shoot, ShootingError, ShootingIterate, ShootingProblem};
use jetflow::integrators::{integrate_full, integrate_reduced, PhaseState, Trajectory};
use jetflow::verify::{run_structure_checks, VerifyReport};
use jetflow::{momentum_map, CotangentState, IntegrationError, Mu, ReducedState, StructureConstants};

use crate::config::{ExperimentConfig, FieldError, Initial};
use crate::output::{num, Artifact};

/// How a run that produced output ended. Maps onto the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    CheckFailed,
    Escaped,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::CheckFailed => 1,
            Status::Escaped => 3,
        }
    }
}

/// Exit status for configuration problems. No output is written in that case.
pub const CONFIG_ERROR_EXIT: u8 = 2;

pub struct Run {
    pub artifact: Artifact,
    pub status: Status,
}

/// Structure verification. With `corrupt` set, one bracket constant is perturbed so the
/// suite's ability to catch a broken table can be exercised end to end.
pub fn verify(corrupt: bool) -> (VerifyReport, Status) {
    let mut sc = StructureConstants::jet_space();
    if corrupt {
        sc.entries_mut()[0].coeff += 1e-3;
    }
    let report = run_structure_checks(&sc);
    let status = if report.all_passed() {
        Status::Success
    } else {
        Status::CheckFailed
    };
    (report, status)
}

const REDUCED_COLUMNS: [&str; 7] = [
    "t[time]",
    "x[length]",
    "y[length]",
    "px[momentum]",
    "py[momentum]",
    "energy[energy]",
    "angular_momentum[action]",
];

const FULL_COLUMNS: [&str; 18] = [
    "t[time]",
    "x[length]",
    "y[length]",
    "theta1[length]",
    "theta2[length]",
    "theta3[length]",
    "theta4[length^2]",
    "theta5[length^2]",
    "theta6[length^3]",
    "px[momentum]",
    "py[momentum]",
    "p1[momentum]",
    "p2[momentum]",
    "p3[momentum]",
    "p4[momentum/length]",
    "p5[momentum/length]",
    "p6[momentum/length^2]",
    "energy[energy]",
];

fn write_samples<S: PhaseState>(a: &mut Artifact, traj: &Trajectory<S>, row: impl Fn(&S) -> Vec<f64>) {
    for ((t, s), d) in traj.times.iter().zip(&traj.states).zip(&traj.diagnostics) {
        let mut values = vec![*t];
        values.extend(row(s));
        values.push(d.energy);
        a.record(&values);
    }
}

fn summarize<S: PhaseState>(a: &mut Artifact, traj: &Trajectory<S>) {
    let r = conservation_report(traj);
    a.meta(&format!(
        "summary: samples={} max_energy_drift={} max_momentum_drift={}",
        r.samples,
        num(r.max_energy_drift),
        num(r.max_momentum_drift)
    ));
}

fn finish_integration<S: PhaseState>(
    a: &mut Artifact,
    result: Result<Trajectory<S>, IntegrationError<S>>,
    row: impl Fn(&S) -> Vec<f64>,
) -> Result<Status, FieldError> {
    match result {
        Ok(traj) => {
            write_samples(a, &traj, row);
            summarize(a, &traj);
            Ok(Status::Success)
        }
        Err(IntegrationError::Escape(e)) => {
            write_samples(a, &e.partial, row);
            a.truncated(&format!("trajectory escaped at t={}", num(e.time)));
            Ok(Status::Escaped)
        }
        Err(e @ (IntegrationError::TangentOverflow { .. } | IntegrationError::StepUnderflow { .. })) => {
            a.truncated(&e.to_string());
            Ok(Status::Escaped)
        }
        Err(IntegrationError::Config(e)) => Err(FieldError {
            field: "integrator".into(),
            message: e.to_string(),
        }),
    }
}

pub fn simulate(cfg: &ExperimentConfig, freeze: bool) -> Result<Run, FieldError> {
    let initial = cfg.initial()?;
    let icfg = cfg.integrator_config();
    let mut artifact = Artifact::new("simulate", Some(cfg), cfg.output.format, freeze);
    let status = match initial {
        Initial::Reduced(s0) => {
            artifact.header(&REDUCED_COLUMNS);
            let result = integrate_reduced(&cfg.mu(), &s0, &icfg);
            finish_integration(&mut artifact, result, |s: &ReducedState| {
                vec![s.x, s.y, s.px, s.py, s.angular_momentum()]
            })?
        }
        Initial::Full(s0) => {
            artifact.header(&FULL_COLUMNS);
            let result = integrate_full(&s0, &icfg);
            finish_integration(&mut artifact, result, |s: &CotangentState| {
                s.to_array().to_vec()
            })?
        }
    };
    Ok(Run { artifact, status })
}

/// Level and planar state for the reduced analyses. A full initial state supplies its own
/// momentum map.
fn reduced_start(cfg: &ExperimentConfig) -> Result<(Mu, ReducedState), FieldError> {
    Ok(match cfg.initial()? {
        Initial::Reduced(s) => (cfg.mu(), s),
        Initial::Full(s) => (momentum_map(&s), s.reduced()),
    })
}

pub fn section(cfg: &ExperimentConfig, freeze: bool) -> Result<Run, FieldError> {
    let a = cfg.analysis()?;
    let mu = cfg.mu();
    let energy = a.energy.ok_or_else(|| FieldError {
        field: "analysis.energy".into(),
        message: "required by the section command".into(),
    })?;
    if a.seeds.is_empty() {
        return Err(FieldError {
            field: "analysis.seeds".into(),
            message: "at least one seed is required".into(),
        });
    }
    let seeds = a
        .seeds
        .iter()
        .enumerate()
        .map(|(k, s)| match s.as_slice() {
            [x, y, px] => seed_on_shell(&mu, energy, *x, *y, *px).ok_or_else(|| FieldError {
                field: format!("analysis.seeds[{k}]"),
                message: "no real p_y places this seed on the energy shell".into(),
            }),
            [x, y, px, py] => Ok(ReducedState::new(*x, *y, *px, *py)),
            _ => unreachable!("seed lengths are validated"),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let sections = poincare_section_with_tolerance(
        &mu,
        energy,
        &seeds,
        &cfg.integrator_config(),
        a.max_crossings,
        a.section_tolerance,
    )
    .map_err(|e| match e {
        SectionError::OffShell { seed_index, .. } => FieldError {
            field: format!("analysis.seeds[{seed_index}]"),
            message: e.to_string(),
        },
        SectionError::Config(c) => FieldError {
            field: "integrator".into(),
            message: c.to_string(),
        },
    })?;

    let mut artifact = Artifact::new("section", Some(cfg), cfg.output.format, freeze);
    for (k, s) in seeds.iter().enumerate() {
        artifact.meta(&format!(
            "seed {k}: x={} y={} px={} py={}",
            num(s.x),
            num(s.y),
            num(s.px),
            num(s.py)
        ));
    }
    artifact.header(&[
        "seed[index]",
        "crossing[index]",
        "t[time]",
        "x[length]",
        "px[momentum]",
        "py[momentum]",
    ]);
    let mut status = Status::Success;
    for sec in &sections {
        for p in &sec.points {
            artifact.record_fields(&[
                sec.seed_index.to_string(),
                p.crossing_index.to_string(),
                num(p.crossing_time),
                num(p.x),
                num(p.px),
                num(p.py),
            ]);
        }
    }
    for sec in &sections {
        let label = match sec.status {
            SeedStatus::Complete => "complete".to_string(),
            SeedStatus::TimeLimit => "time-limit".to_string(),
            SeedStatus::NoCrossings => "no-crossings".to_string(),
            SeedStatus::Escaped { time } => {
                status = Status::Escaped;
                artifact.truncated(&format!("seed {} escaped at t={}", sec.seed_index, num(time)));
                "escaped".to_string()
            }
        };
        artifact.meta(&format!(
            "seed {} status: {label} crossings={}",
            sec.seed_index,
            sec.points.len()
        ));
    }
    Ok(Run { artifact, status })
}

pub fn lyapunov(cfg: &ExperimentConfig, freeze: bool) -> Result<Run, FieldError> {
    let (mu, s0) = reduced_start(cfg)?;
    let renorm = cfg.analysis.as_ref().map_or(1.0, |a| a.renorm_interval);
    let mut artifact = Artifact::new("lyapunov", Some(cfg), cfg.output.format, freeze);
    artifact.header(&["t[time]", "mle[1/time]"]);
    let (est, status) = match lyapunov_mle(&mu, &s0, &cfg.integrator_config(), renorm) {
        Ok(est) => (est, Status::Success),
        Err(LyapunovError::Escape { time, partial }) => {
            for (t, v) in &partial.history {
                artifact.record(&[*t, *v]);
            }
            artifact.truncated(&format!("trajectory escaped at t={}", num(time)));
            return Ok(Run {
                artifact,
                status: Status::Escaped,
            });
        }
        Err(e) => {
            return Err(FieldError {
                field: "integrator".into(),
                message: e.to_string(),
            })
        }
    };
    for (t, v) in &est.history {
        artifact.record(&[*t, *v]);
    }
    artifact.meta(&format!(
        "summary: mle={} converged={} renorm_interval={}",
        num(est.mle),
        est.converged,
        num(est.renorm_interval)
    ));
    Ok(Run { artifact, status })
}

fn write_iterates(a: &mut Artifact, history: &[ShootingIterate]) {
    for it in history {
        a.record_fields(&[
            it.iteration.to_string(),
            num(it.momenta[0]),
            num(it.momenta[1]),
            num(it.residual),
        ]);
    }
}

pub fn shoot_cmd(cfg: &ExperimentConfig, freeze: bool) -> Result<Run, FieldError> {
    let s = cfg.shoot()?;
    let problem = ShootingProblem {
        mu: cfg.mu(),
        start: s.start,
        target: s.target,
        horizon: s.horizon,
        initial_guess: s.initial_guess,
        tolerance: s.tolerance,
        max_iterations: s.max_iterations,
        step: cfg.integrator.step,
    };
    let mut artifact = Artifact::new("shoot", Some(cfg), cfg.output.format, freeze);
    artifact.header(&["iteration[count]", "px[momentum]", "py[momentum]", "residual[length]"]);
    let status = match shoot(&problem) {
        Ok(sol) => {
            write_iterates(&mut artifact, &sol.history);
            artifact.meta(&format!(
                "solution: px={} py={} residual={} iterations={}",
                num(sol.momenta[0]),
                num(sol.momenta[1]),
                num(sol.residual),
                sol.iterations
            ));
            match sol.lift(&problem, usize::MAX) {
                Ok(traj) => {
                    let end = traj.last().expect("lifted geodesic has samples");
                    let b = end.base;
                    let theta: Vec<String> = b.theta.iter().map(|v| num(*v)).collect();
                    artifact.meta(&format!(
                        "endpoint: x={} y={} theta=[{}]",
                        num(b.x),
                        num(b.y),
                        theta.join(", ")
                    ));
                    Status::Success
                }
                Err(e) => {
                    artifact.truncated(&format!("lift failed: {e}"));
                    Status::Escaped
                }
            }
        }
        Err(ShootingError::InvalidProblem(msg)) => {
            return Err(FieldError {
                field: "shoot".into(),
                message: msg.into(),
            })
        }
        Err(ShootingError::Escape { history, .. }) => {
            write_iterates(&mut artifact, &history);
            artifact.truncated("shot escaped even after step damping");
            Status::Escaped
        }
        Err(e @ (ShootingError::MaxIterations { .. } | ShootingError::SingularJacobian { .. })) => {
            let history = match &e {
                ShootingError::MaxIterations { history, .. }
                | ShootingError::SingularJacobian { history, .. } => history,
                _ => unreachable!(),
            };
            write_iterates(&mut artifact, history);
            artifact.meta(&format!("FAILED: {e}"));
            Status::CheckFailed
        }
    };
    Ok(Run { artifact, status })
}
