//! Command-line front end: instance files, solvers, runs, generators,
//! reductions and verification.

pub mod commands;
pub mod error;
pub mod instance;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{exit, CliError};
pub use instance::InstanceFile;

#[derive(Debug, Parser)]
#[command(name = "deliberate", version, about = "Deliberative coalition formation toolkit")]
pub struct Cli {
    /// Worker threads for parallel solvers (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a popular proposal.
    Solve(SolveArgs),
    /// Run k-compromise dynamics and write the trace.
    Simulate(SimulateArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Encode a graph or formula as a deliberation space.
    Reduce(ReduceArgs),
    /// Check an instance, trace, or reduction.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Brute,
    Ilp,
    PerfectLp,
    SubsetLp,
    Cells,
    Grid,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// Score threshold; exit code 2 when no proposal reaches it.
    #[arg(long)]
    pub eta: Option<String>,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub brute_max_d: Option<usize>,
    #[arg(long)]
    pub ilp_max_n: Option<usize>,
    #[arg(long)]
    pub subset_max_positions: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchedulerArg {
    First,
    Random,
    Adversarial,
    GreedyFast,
    /// Constructive grid procedure.
    GridConverge,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "random")]
    pub scheduler: SchedulerArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV trace output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    HypSlow,
    EucSlow,
    ExpCompromise,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Hypercube,
    Euclidean,
    Grid,
    GridNonneg,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub kind: KindArg,
    /// Coordinate range for random instances.
    #[arg(long, default_value_t = 5)]
    pub range: i64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    #[value(name = "3sat")]
    Sat,
    IndepSet,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub from: SourceArg,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Independent-set size.
    #[arg(long)]
    pub kappa: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the certificate on its own.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhatArg {
    ExpCompromise,
    Trace,
    Reduction,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub what: WhatArg,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Compromise size for trace checks.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Instance the trace was run on; enables weighted checks.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Exhaustive proposal sweep for exp-compromise instances.
    #[arg(long)]
    pub sweep: bool,
}

/// Runs a parsed command, writing the summary to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match cli.command {
        Command::Solve(a) => commands::solve(&a, out),
        Command::Simulate(a) => commands::simulate(&a, out),
        Command::Generate(a) => commands::generate(&a, out),
        Command::Reduce(a) => commands::reduce(&a, out),
        Command::Verify(a) => commands::verify(&a, out),
    }
}
