//! `jetflow` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use jetflow_cli::commands::{self, Run, Status, CONFIG_ERROR_EXIT};
use jetflow_cli::config::{ExperimentConfig, FieldError};

#[derive(Parser)]
#[command(name = "jetflow", version, about = "Sub-Riemannian geodesic flow on the jet space J²(R², R)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structure and reduction property suites.
    Verify {
        /// Write the report here as well as to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Perturb one structure constant before checking.
        #[arg(long, hide = true)]
        corrupt_structure: bool,
    },
    /// Integrate one trajectory.
    Simulate(RunArgs),
    /// Poincaré section `y = 0, p_y > 0` for a list of seeds.
    Section(RunArgs),
    /// Maximal Lyapunov exponent of one trajectory.
    Lyapunov(RunArgs),
    /// Solve the two-point boundary problem for a reduced geodesic.
    Shoot(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output path; overrides `output.path`. Standard output when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp from the metadata block.
    #[arg(long)]
    freeze_metadata: bool,
    /// Override `integrator.step`.
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Override `integrator.t_final`.
    #[arg(long, allow_negative_numbers = true)]
    t_final: Option<f64>,
}

fn load(args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(step) = args.step {
        cfg.integrator.step = step;
    }
    if let Some(t) = args.t_final {
        cfg.integrator.t_final = t;
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("jetflow: configuration error: {e}");
    ExitCode::from(CONFIG_ERROR_EXIT)
}

fn experiment(
    args: &RunArgs,
    driver: fn(&ExperimentConfig, bool) -> Result<Run, FieldError>,
) -> ExitCode {
    let cfg = match load(args) {
        Ok(cfg) => cfg,
        Err(e) => return config_error(format!("{e:#}")),
    };
    let run = match driver(&cfg, args.freeze_metadata) {
        Ok(run) => run,
        Err(e) => return config_error(e),
    };
    let path = cfg.output.path.as_ref().map(PathBuf::from);
    if let Err(e) = run.artifact.emit(path.as_deref()) {
        return config_error(format!("writing output: {e}"));
    }
    match run.status {
        Status::Success => {}
        Status::CheckFailed => eprintln!("jetflow: run did not meet its success criterion"),
        Status::Escaped => eprintln!("jetflow: run stopped early; output is truncated"),
    }
    ExitCode::from(run.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify {
            out,
            corrupt_structure,
        } => {
            let (report, status) = commands::verify(*corrupt_structure);
            let text = format!("{report}\n");
            print!("{text}");
            if let Some(p) = out {
                if let Err(e) = std::fs::write(p, &text) {
                    return config_error(format!("writing {}: {e}", p.display()));
                }
            }
            ExitCode::from(status.exit_code())
        }
        Command::Simulate(a) => experiment(a, commands::simulate),
        Command::Section(a) => experiment(a, commands::section),
        Command::Lyapunov(a) => experiment(a, commands::lyapunov),
        Command::Shoot(a) => experiment(a, commands::shoot_cmd),
    }
}
