//! `kp`: verification harness for union-of-ball volume inequalities.
//!
//! Subcommands: volume, check-condition, verify-kp, csikos-check, archimedes,
//! search, trace-motion. Reports go to stdout (text or CSV), trace artifacts
//! to `--out`, timing to stderr. Exit codes: 0 pass, 1 verification finding,
//! 2 parse error, 3 domain/unsupported, 4 precondition violated.

mod commands;
mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CommandOutcome, MotionChoice};
use instance::load_instance;

/// Failures that abort a command before it can produce a report.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Valid input outside the supported domain (exit 3).
    Domain(String),
    /// A precondition such as the expansion requirement fails (exit 4).
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<kp_core::Error> for CliError {
    fn from(e: kp_core::Error) -> Self {
        match e {
            kp_core::Error::NotAnExpansion { .. } => CliError::Precondition(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum MeasureModeArg {
    #[default]
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum ConditionModeArg {
    #[default]
    Closed,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum MotionArg {
    #[default]
    Lifted,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum OnOff {
    On,
    #[default]
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum OutputFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "kp",
    about = "Power-diagram measures and volume-monotonicity verification for ball unions",
    version
)]
struct Cli {
    /// Seed for all Monte Carlo draws (overrides the instance file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count (overrides the instance file).
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Write the command's CSV artifact (or the report as CSV) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report rendering on stdout.
    #[arg(long, global = true, value_enum, default_value_t)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Union measure of the instance's balls at parameter s.
    Volume {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: MeasureModeArg,
        /// Radius-family parameter; instance file value used when omitted.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Per-pair interaction counts against the d+1 bound.
    CheckCondition {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ConditionModeArg,
    },
    /// Expansion check, hypothesis counts, and the volume defect of a pair.
    VerifyKp {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: MeasureModeArg,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Wall-sum derivative against a central finite difference along a motion.
    CsikosCheck {
        instance: PathBuf,
        /// Number of interior grid times.
        #[arg(long = "t-grid", default_value_t = 9)]
        t_grid: usize,
        #[arg(long)]
        s: Option<f64>,
        /// Finite-difference step (default 1e-5 exact, 1e-2 Monte Carlo).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        mode: MeasureModeArg,
        #[arg(long, value_enum, default_value_t)]
        motion: MotionArg,
    },
    /// Lifting identity for a random truncated polytope.
    Archimedes {
        /// Section dimension (1 or 2).
        #[arg(long)]
        n: usize,
        /// Lift count (1 or 2).
        #[arg(long)]
        k: usize,
        /// Number of random halfspaces.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Base radius of the truncated polytope's ball.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        /// Finite-difference step (default 1e-5 with no halfspaces, else 1e-2).
        #[arg(long)]
        h: Option<f64>,
    },
    /// Random expansion-pair campaign recording the minimum defect.
    Search {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "n-balls", default_value_t = 3)]
        n_balls: usize,
        /// Attempted samples (rejection attempts count).
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Only evaluate pairs whose start configuration satisfies the
        /// d+1 interaction bound.
        #[arg(long, value_enum, default_value_t)]
        condition: OnOff,
        /// Side of the sampling box.
        #[arg(long = "box", default_value_t = 4.0)]
        box_side: f64,
        #[arg(long, value_enum, default_value_t)]
        mode: MeasureModeArg,
    },
    /// Plot-ready trace of distances, measures, and interaction counts along
    /// the lifted motion of a pair.
    TraceMotion {
        instance: PathBuf,
        #[arg(long = "t-grid", default_value_t = 11)]
        t_grid: usize,
        #[arg(long)]
        s: Option<f64>,
    },
}

fn run(cli: &Cli) -> Result<CommandOutcome, CliError> {
    match &cli.command {
        Command::Volume { instance, mode, s } => {
            let inst = load_instance(instance)?;
            let seed = cli.seed.or(inst.seed).unwrap_or(0);
            let samples = cli.samples.or(inst.samples).unwrap_or(1_000_000);
            let s = s.or(inst.s).unwrap_or(0.0);
            commands::cmd_volume(&inst, *mode == MeasureModeArg::Exact, s, samples, seed)
        }
        Command::CheckCondition { instance, mode } => {
            let inst = load_instance(instance)?;
            let seed = cli.seed.or(inst.seed).unwrap_or(0);
            let mode = match mode {
                ConditionModeArg::Closed => kp_core::IntersectionMode::Closed,
                ConditionModeArg::Interior => kp_core::IntersectionMode::Interior,
            };
            commands::cmd_check_condition(&inst, mode, seed)
        }
        Command::VerifyKp { instance, mode, s } => {
            let inst = load_instance(instance)?;
            let seed = cli.seed.or(inst.seed).unwrap_or(0);
            let samples = cli.samples.or(inst.samples).unwrap_or(1_000_000);
            let s = s.or(inst.s).unwrap_or(0.0);
            commands::cmd_verify_kp(&inst, *mode == MeasureModeArg::Exact, s, samples, seed)
        }
        Command::CsikosCheck {
            instance,
            t_grid,
            s,
            h,
            mode,
            motion,
        } => {
            let inst = load_instance(instance)?;
            let seed = cli.seed.or(inst.seed).unwrap_or(0);
            let samples = cli.samples.or(inst.samples).unwrap_or(1_000_000);
            let s = s.or(inst.s).unwrap_or(0.0);
            let exact = *mode == MeasureModeArg::Exact;
            let h = h.unwrap_or(if exact { 1e-5 } else { 1e-2 });
            let motion = match motion {
                MotionArg::Lifted => MotionChoice::Lifted,
                MotionArg::Linear => MotionChoice::Linear,
            };
            commands::cmd_csikos_check(&inst, motion, exact, *t_grid, s, h, samples, seed)
        }
        Command::Archimedes { n, k, m, r0, s, h } => {
            let seed = cli.seed.unwrap_or(0);
            let samples = cli.samples.unwrap_or(1_000_000);
            let h = h.unwrap_or(if *m == 0 { 1e-5 } else { 1e-2 });
            commands::cmd_archimedes(*n, *k, *m, *r0, *s, h, samples, seed)
        }
        Command::Search {
            d,
            n_balls,
            trials,
            condition,
            box_side,
            mode,
        } => {
            let seed = cli.seed.unwrap_or(0);
            let samples = cli.samples.unwrap_or(1_000_000);
            commands::cmd_search(
                *d,
                *n_balls,
                *trials,
                *condition == OnOff::On,
                *box_side,
                *mode == MeasureModeArg::Exact,
                samples,
                seed,
            )
        }
        Command::TraceMotion {
            instance,
            t_grid,
            s,
        } => {
            let inst = load_instance(instance)?;
            let seed = cli.seed.or(inst.seed).unwrap_or(0);
            let samples = cli.samples.or(inst.samples).unwrap_or(1_000_000);
            let s = s.or(inst.s).unwrap_or(0.0);
            commands::cmd_trace_motion(&inst, *t_grid, s, samples, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = match cli.format {
                OutputFormat::Text => outcome.report.render_text(),
                OutputFormat::Csv => outcome.report.render_csv(),
            };
            print!("{rendered}");
            if let Some(path) = &cli.out {
                let content = outcome
                    .artifact
                    .as_ref()
                    .map(|a| a.render())
                    .unwrap_or_else(|| outcome.report.render_csv());
                if let Err(e) = std::fs::write(path, content) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            eprintln!("elapsed_secs: {:.3}", started.elapsed().as_secs_f64());
            ExitCode::from(outcome.exit_code)
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
