//! `streamcode`: construct, verify and simulate finite-horizon unbounded
//! codes from the command line.
//!
//! Exit codes: 0 pass, 1 verification failed, 2 invalid or infeasible
//! parameters, 3 rejection sampling exhausted, 4 enumeration cap exceeded,
//! 64 usage error, 65 unparsable artifact, 74 I/O failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "streamcode", version, about = "Unbounded error-correcting codes at desk scale")]
struct Cli {
    /// Output format for reports, trial records and bound tables.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,

    /// Where to write the artifact (construct) or the output (other commands).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an artifact by rejection sampling and verify it.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Re-run the verifier matching an artifact's header.
    Verify(VerifyArgs),
    /// Send codewords of a linear code through a channel and decode.
    Simulate(SimulateArgs),
    /// Tabulate the rate formulas for a list of eps values.
    Bounds(BoundsArgs),
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    Linear(LinearArgs),
    Subset(SubsetArgs),
    Layered(LayeredArgs),
    Checksum(ChecksumArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Criterion {
    Unbounded,
    RandomError,
}

#[derive(Debug, Args)]
struct LinearArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long = "R")]
    rate: f64,
    /// Support ratio; acts as r0 under the random-error criterion.
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    k0: usize,
    /// Horizon.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_attempts: usize,
    /// Bound on enumeration work per verification.
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long, value_enum, default_value = "unbounded")]
    criterion: Criterion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SubsetMethod {
    Greedy,
    Trivial,
}

#[derive(Debug, Args)]
struct SubsetArgs {
    #[arg(long)]
    n: usize,
    /// log2 of the number of subsets (greedy only).
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "greedy")]
    method: SubsetMethod,
    /// Keep only the first T points of every subset.
    #[arg(long)]
    t: Option<usize>,
    /// Candidate centers tried per greedy step.
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
}

#[derive(Debug, Args)]
struct LayeredArgs {
    #[arg(long)]
    eps: f64,
    /// Message bits of the seed code (ignored with --base).
    #[arg(long, default_value_t = 8)]
    k0: usize,
    /// Rate of the seed code.
    #[arg(long = "R", default_value_t = 0.5)]
    rate: f64,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    block_bits: usize,
    #[arg(long)]
    subblock_bits: usize,
    /// Subset-code artifact used for every sub-block.
    #[arg(long)]
    subset: PathBuf,
    /// Extend this layered artifact instead of a fresh seed code.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Checksum relative distance; defaults to 2 eps.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_attempts: usize,
}

#[derive(Debug, Args)]
struct ChecksumArgs {
    /// Input length L.
    #[arg(long)]
    input: usize,
    #[arg(long)]
    delta: f64,
    /// Parity rows; defaults to the least fixed point for delta.
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    max_attempts: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    artifact: PathBuf,
    /// Criterion for linear schedules.
    #[arg(long, value_enum, default_value = "unbounded")]
    criterion: Criterion,
    #[arg(long)]
    cap: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Channel {
    Bsc,
    PerPacket,
    Adversarial,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Linear schedule artifact.
    artifact: PathBuf,
    #[arg(long, value_enum, default_value = "bsc")]
    channel: Channel,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Prefix length sent through the channel; defaults to the horizon.
    #[arg(long)]
    j: Option<usize>,
    /// Message prefix to recover; defaults to floor(R j).
    #[arg(long)]
    target: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    packet_len: usize,
    #[arg(long, default_value_t = 1)]
    overshoot: usize,
    /// Attack only the first this-many packets (per-packet channel).
    #[arg(long)]
    packets: Option<usize>,
    /// Flip positions for the adversarial channel.
    #[arg(long, value_delimiter = ',')]
    positions: Vec<usize>,
    /// Cap on decoder candidates.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    eps: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] streamcode::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use streamcode::Error as E;
        match self {
            CliError::Usage(_) => 64,
            CliError::Io { .. } => 74,
            CliError::Core(e) => match e {
                E::ConstructionFailed { .. } => 3,
                E::ScaleExceeded { .. } => 4,
                E::Parse(_) => 65,
                _ => 2,
            },
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("STREAMCODE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("STREAMCODE_THREADS={v} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

/// Returns whether the command's verification (if any) passed.
fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Construct { kind } => {
            let built = match kind {
                ConstructKind::Linear(a) => commands::construct_linear(&a)?,
                ConstructKind::Subset(a) => commands::construct_subset(&a)?,
                ConstructKind::Layered(a) => commands::construct_layered(&a)?,
                ConstructKind::Checksum(a) => commands::construct_checksum(&a)?,
            };
            let report = output::render_report(cli.format, &built.row, &built.report);
            match out {
                Some(p) => {
                    write_out(Some(p), &built.artifact)?;
                    print!("{report}");
                }
                None => print!("{}{report}", built.artifact),
            }
            Ok(built.report.passed)
        }
        Command::Verify(a) => {
            let (row, report) = commands::verify(&a)?;
            write_out(out, &output::render_report(cli.format, &row, &report))?;
            Ok(report.passed)
        }
        Command::Simulate(a) => {
            let rows = commands::simulate(&a)?;
            write_out(out, &output::render_sim(cli.format, &rows))?;
            Ok(true)
        }
        Command::Bounds(a) => {
            let rows = commands::bounds(&a.eps)?;
            write_out(out, &output::render_bounds(cli.format, &rows))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
