//! Command-line front end: JSON instances in, JSON reports out.
//!
//! Exit codes: 0 decided, 2 invalid input, 3 inconclusive or over a size cap,
//! 4 internal-consistency alarm, 1 for I/O failures on output.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "QUIVER_EDMONDS_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Capped(String),
    #[error("{0}")]
    Alarm(String),
    #[error("output failed: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capped(_) => 3,
            CliError::Alarm(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

impl From<quiver_edmonds::Error> for CliError {
    fn from(e: quiver_edmonds::Error) -> Self {
        use quiver_edmonds::Error as E;
        match e {
            E::SizeCapExceeded(_) => CliError::Capped(e.to_string()),
            E::InconsistencyAlarm(_) => CliError::Alarm(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Decide membership in orbit semigroups of quiver representations.
///
/// Instances are JSON documents with exact rational entries. Paths are lists
/// of arrow ids in traversal order; a path `[a1, a2, ..., ak]` evaluates to
/// `W(ak) ... W(a2) W(a1)`. When INPUT is a directory every `*.json` file in
/// it is processed and the reports are printed as one JSON array.
#[derive(Debug, Parser)]
#[command(name = "quiver-edmonds", version)]
pub struct Cli {
    /// Accept floating-point matrix entries; restricts decisions to the
    /// randomized and capacity routes.
    #[arg(long, global = true)]
    pub inexact: bool,

    /// Master seed for every randomized choice.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads when INPUT is a directory.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the block-matrix family and weight split of an instance.
    BuildDatum {
        input: PathBuf,
        /// Also write the family document here (a directory in batch mode).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Decide whether the family's span contains a non-singular matrix.
    Edmonds {
        input: PathBuf,
        /// INPUT is a family document written by `build-datum`.
        #[arg(long)]
        family: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Decide positivity of the capacity by operator scaling.
    Capacity {
        input: PathBuf,
        /// INPUT is a family document written by `build-datum`.
        #[arg(long)]
        family: bool,
        #[command(flatten)]
        capacity: CapacityArgs,
    },
    /// Exact membership, capacity and weight-semigroup membership together.
    Membership {
        input: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        capacity: CapacityArgs,
    },
    /// Test the multiples n sigma for n up to --n-max against the capacity.
    Saturate {
        input: PathBuf,
        #[arg(long, default_value_t = quiver_edmonds::semigroup::DEFAULT_N_MAX)]
        n_max: u32,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        capacity: CapacityArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildDatum { .. } => "build-datum",
            Command::Edmonds { .. } => "edmonds",
            Command::Capacity { .. } => "capacity",
            Command::Membership { .. } => "membership",
            Command::Saturate { .. } => "saturate",
        }
    }

    pub fn input(&self) -> &PathBuf {
        match self {
            Command::BuildDatum { input, .. }
            | Command::Edmonds { input, .. }
            | Command::Capacity { input, .. }
            | Command::Membership { input, .. }
            | Command::Saturate { input, .. } => input,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Symbolic within the size caps, randomized beyond them.
    Auto,
    Randomized,
    /// Symbolic only; exceeding the caps exits with code 3.
    Symbolic,
}

#[derive(Debug, Clone, Copy, Args, serde::Serialize)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    /// Random evaluations in the randomized test.
    #[arg(long, default_value_t = 40)]
    pub trials: usize,
    /// Coefficients are drawn below this bound (default 2N).
    #[arg(long)]
    pub sample_bound: Option<u64>,
    /// Largest matrix size expanded symbolically.
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    /// Largest family expanded symbolically.
    #[arg(long, default_value_t = 12)]
    pub max_members: usize,
}

#[derive(Debug, Clone, Copy, Args, serde::Serialize)]
pub struct CapacityArgs {
    /// Iteration budget (default 100 N^2 (b + N), b the input bit length).
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Distance to doubly stochastic that certifies positivity (default 1/(N+1)).
    #[arg(long)]
    pub threshold: Option<f64>,
}

/// Runs the parsed command line, printing the report to stdout and
/// diagnostics to stderr. Returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let input = cli.command.input();
    if input.is_dir() {
        return match commands::run_batch(cli) {
            Ok((text, code)) => {
                println!("{text}");
                code
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        };
    }
    match commands::run_file(cli, input, cli.command_emit()) {
        Ok(outcome) => {
            if let Some(note) = &outcome.note {
                eprintln!("{note}");
            }
            println!("{}", outcome.render());
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

impl Cli {
    fn command_emit(&self) -> Option<PathBuf> {
        match &self.command {
            Command::BuildDatum { emit, .. } => emit.clone(),
            _ => None,
        }
    }
}
