//! `qmarkov`: batch front end over the qmarkov library.
//!
//! Exit status: 0 on success, 2 when an input fails validation, 3 when an
//! analysis cannot complete.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qmarkov::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qmarkov",
    version,
    about = "Markov densities, measurements, chains, walks, hidden states and OOMs"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct CesaroArgs {
    /// Stationarity residual to reach.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 40)]
    pub max_doublings: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Outcome or word distribution of a measurement in a density.
    Measure {
        #[arg(long)]
        measurement: PathBuf,
        #[arg(long)]
        density: PathBuf,
        /// Word length; 1 gives the single-outcome distribution.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// A value counts as nonnegative when it is at least -tol.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Iterates a Markov operator and prints the coordinates of each step.
    ChainEvolve {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        density: PathBuf,
        #[arg(long)]
        steps: usize,
    },
    /// Cesàro average of a chain by the doubling scheme.
    ChainCesaro {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        density: PathBuf,
        #[command(flatten)]
        cesaro: CesaroArgs,
    },
    /// Node probabilities of a walk on a directed graph.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        /// Operator on the edge space; defaults to the edge shift.
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Start density file.
        #[arg(long, conflicts_with = "start_edge")]
        density: Option<PathBuf>,
        /// Start at the pure state on this edge index.
        #[arg(long)]
        start_edge: Option<usize>,
        #[arg(long)]
        steps: usize,
        /// Also compute the limiting node distribution.
        #[arg(long)]
        limit: bool,
        #[command(flatten)]
        cesaro: CesaroArgs,
    },
    /// Evaluates |E(XY) - E(YZ)| <= 1 - E(XZ).
    Bell {
        #[arg(
            long,
            value_enum,
            conflicts_with = "table",
            required_unless_present = "table"
        )]
        builtin: Option<Builtin>,
        #[arg(long)]
        table: Option<PathBuf>,
        /// Names of the three table functions, comma separated.
        #[arg(long, default_value = "X,Y,Z")]
        functions: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Four-component two-spin Markov state from spin expectations.
    Feynman {
        #[arg(long, default_value = "0.5")]
        sx: String,
        #[arg(long, default_value = "0.5")]
        sy: String,
        #[arg(long, default_value = "0.5")]
        sz: String,
    },
    /// Word probabilities of an OOM.
    OomProb {
        #[arg(long)]
        oom: PathBuf,
        /// Words to evaluate; repeatable.
        #[arg(long = "word")]
        words: Vec<String>,
        /// Evaluate every word of this length.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Truncated prediction matrix and its numerical rank.
    OomRank {
        #[arg(long)]
        oom: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Hidden-state lift and its step distributions.
    OomLift {
        #[arg(long)]
        oom: PathBuf,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Block entropy rates in bits.
    OomEntropy {
        #[arg(long)]
        oom: PathBuf,
        #[arg(long, default_value_t = 8)]
        t_max: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    FiveState,
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_validation() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command).and_then(|doc| output::emit(&doc, &cli.out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
