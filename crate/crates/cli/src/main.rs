//! `diffcyc`: verify, analyse, extend and classify cyclic combinatorial 3-manifolds.
//!
//! Exit codes: 0 verdict reached, 2 usage error, 3 malformed input, 4 resource limit
//! hit (progress is checkpointed), 1 anything else.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::ResourceLimit;
use crate::input::InputError;

#[derive(Parser, Debug)]
#[command(
    name = "diffcyc",
    version,
    about = "Cyclic combinatorial 3-manifolds given by difference cycles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Registry directory holding classification results.
    #[arg(
        long,
        env = "DIFFCYC_REGISTRY",
        default_value = "registry",
        global = true
    )]
    pub registry: PathBuf,

    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exactly one source: `--input` or a registry address `--n/--index`.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Complex text such as "{(1:1:1:2)}", a registry address "n:index" or a file.
    #[arg(short, long, conflicts_with_all = ["n", "index"])]
    pub input: Option<String>,

    /// Vertex count of a registry address.
    #[arg(long, requires = "index")]
    pub n: Option<u32>,

    /// Index of a registry address.
    #[arg(long, requires = "n")]
    pub index: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Manifold verdict, f-vector, connectivity and neighborliness.
    Verify(InputArgs),
    /// Homology, orientability and a simplified edge-path group.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        /// Also write the group presentation in GAP syntax to this file.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Tietze move budget.
        #[arg(long, default_value_t = diffcyc::invariants::DEFAULT_TIETZE_BUDGET)]
        budget: usize,
    },
    /// Infinite series of growing difference cycles.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// The neighborly lens-space series and its checks.
    #[command(subcommand)]
    Lens(LensCommand),
    /// Classify all cyclic 3-manifolds on n vertices and store them in the registry.
    Classify {
        #[arg(long)]
        n: u32,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Stop after this many seconds, keeping a checkpoint.
        #[arg(long, value_parser = positive_f64)]
        time_limit: Option<f64>,
        /// Completed search seeds between checkpoint writes.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        checkpoint_every: u64,
    },
    /// Slicing surface between a vertex set and its complement.
    Slicing {
        #[command(flatten)]
        input: InputArgs,
        /// Part A: "odd", "even" or a comma separated vertex list.
        #[arg(long, default_value = "odd")]
        part: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeriesCommand {
    /// Evaluate the dense series criterion.
    Check(InputArgs),
    /// Member k of the dense series.
    Extend {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: u32,
    },
    /// Walk back to the first member of the dense series.
    Minimal(InputArgs),
    /// Order-l series: admissibility and, with --k, a member.
    Order {
        /// Series spec as JSON text or file: {"base": "...", "l": 2, "increments": [[...]]}.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Reduce an order-l series with l a unit to a dense series.
    Reduce {
        #[arg(long)]
        spec: String,
    },
    /// Count distinct dense series starting at up to n vertices in the registry.
    Census {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum LensCommand {
    /// Print L_k.
    Gen {
        #[arg(long)]
        k: u32,
    },
    /// Run the Heegaard checks on L_k or on a fixture (C18, D22).
    Verify {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        k: Option<u32>,
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Lens space type of L_k from the winding system.
    Type {
        #[arg(long)]
        k: u32,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number of seconds, got {s:?}")),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ResourceLimit>().is_some() {
        return 4;
    }
    if err.downcast_ref::<InputError>().is_some() {
        return 3;
    }
    match err.downcast_ref::<diffcyc::Error>() {
        Some(diffcyc::Error::Parse { .. })
        | Some(diffcyc::Error::InvalidCycle(_))
        | Some(diffcyc::Error::InvalidSpec(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
