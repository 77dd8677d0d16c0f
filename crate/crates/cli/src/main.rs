//! Command-line front end: train, predict, evaluate, export, gen, oracle.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal
//! invariant failure. Diagnostics go to stderr. All randomness flows from
//! the single `--seed` flag (or the config file); environment variables are
//! never consulted.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mvrs::ErrorClass;

#[derive(Parser)]
#[command(name = "mvrs", version, about = "Multi-value rule set classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a model from labeled delimited data
    Train(TrainArgs),
    /// Apply a model to new rows, explaining each positive
    Predict(ApplyArgs),
    /// Score a model against labeled data
    Evaluate(ApplyArgs),
    /// Render a model as human-readable if/then text
    Export(ExportArgs),
    /// Generate synthetic data from a planted ground-truth model
    Gen(GenArgs),
    /// Exact MAP by exhaustive enumeration (small search spaces only)
    Oracle(OracleArgs),
}

#[derive(Args)]
pub struct TrainArgs {
    /// Labeled delimited data file
    #[arg(long)]
    pub data: PathBuf,
    /// Run configuration file (TOML)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for output artifacts
    #[arg(long)]
    pub out: PathBuf,
    /// Master seed; overrides the config file
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hold out this fraction for a stratified test split
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Annealing steps per chain
    #[arg(long)]
    pub iters: Option<usize>,
    /// Independent restarts
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Initial temperature
    #[arg(long)]
    pub t0: Option<f64>,
}

#[derive(Args)]
pub struct ApplyArgs {
    /// Model file written by train or oracle
    #[arg(long)]
    pub model: PathBuf,
    /// Codebook file written alongside the model
    #[arg(long)]
    pub codebook: PathBuf,
    /// Delimited data file
    #[arg(long)]
    pub data: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenArgs {
    /// Config file with a [planted] section
    #[arg(long)]
    pub config: PathBuf,
    /// Path for the generated delimited data
    #[arg(long)]
    pub out: PathBuf,
    /// Seed; overrides the config file
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the planted model here
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Also write the matching codebook here
    #[arg(long)]
    pub codebook_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Labeled delimited data file
    #[arg(long)]
    pub data: PathBuf,
    /// Run configuration file (TOML); bounds come from [search]
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for output artifacts
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    // predict output is made for piping; die quietly on a closed pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => commands::train(&args),
        Command::Predict(args) => commands::predict(&args),
        Command::Evaluate(args) => commands::evaluate_cmd(&args),
        Command::Export(args) => commands::export(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Oracle(args) => commands::oracle(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Config => 1u8,
                ErrorClass::Data => 2u8,
                ErrorClass::Internal => 3u8,
            })
        }
    }
}
