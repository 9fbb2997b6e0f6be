//! `causal-probe`: error curves, the verification suite, Monte Carlo runs
//! and the headline-claim reproduction.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or feasibility errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "causal-probe", version, about = "Quantum and classical identification of causal intermediaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate closed-form error probabilities as CSV.
    Curve(CurveArgs),
    /// Run every oracle-versus-formula check and report PASS/FAIL.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of the classical error as CSV.
    Simulate(SimulateArgs),
    /// Smallest number of interrogations reaching an error threshold.
    Claim(ClaimArgs),
    /// Groupings, multiplicities and error probabilities for one (d, n).
    Info(InfoArgs),
}

#[derive(Args, Debug, Clone)]
struct Range {
    /// Dimension of each variable.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// First number of interrogations.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Last number of interrogations (defaults to --n).
    #[arg(long)]
    n_max: Option<usize>,
    /// Step between consecutive n.
    #[arg(long, default_value_t = 1)]
    n_step: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Strategy {
    Classical,
    Coherent,
    IndefiniteBound,
    Reference,
    SeqBound,
    Singlet,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    range: Range,
    /// Strategy to tabulate; repeat for several. Defaults to all.
    #[arg(long = "strategy", value_enum)]
    strategies: Vec<Strategy>,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Loosen every tolerance to at least this value.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corrupt m(4,2) to confirm the suite can fail.
    #[arg(long, hide = true)]
    fault_inject: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    range: Range,
    /// Comma-separated input values; defaults to all zeros for each n.
    #[arg(long, value_delimiter = ',')]
    inputs: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ClaimArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(a) => commands::curve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Claim(a) => commands::claim(a),
        Command::Info(a) => commands::info(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
