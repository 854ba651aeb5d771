//! Command line driver: configure a flow case, run the circuit and oracle
//! paths, measure, inject errors, and emit plot-ready CSV/JSON artifacts.

mod artifacts;
mod config;
mod report;
mod run;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

/// Failures split by exit code: configuration problems exit 2, everything
/// that goes wrong during execution exits 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

// Core errors surface during execution by default; config-stage code wraps
// its own failures in CliError::Config explicitly.
impl From<qflow::Error> for CliError {
    fn from(e: qflow::Error) -> CliError {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Runtime(format!("io error: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "qflow", version, about = "Quantum-encoded 2D flow simulation driver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the circuit and oracle paths, measure, and write an artifact directory
    Run(RunArgs),
    /// Summarize a completed run directory
    Report(ReportArgs),
    /// Sweep an error model over qubits and seeds
    NoiseSweep(SweepArgs),
    /// Emit the measurement plan for a grid
    Plan(PlanArgs),
    /// Emit serialized circuits and gate counts
    Circuit(CircuitArgs),
}

/// Flags shared by the commands that build a run configuration. A config
/// file named with --config overrides any of these flags.
#[derive(Args)]
struct CommonArgs {
    /// Initial condition: "diverging" or "vortex"
    #[arg(long, default_value = "diverging")]
    flow: String,
    /// Qubits on the x axis (grid has 2^nx columns)
    #[arg(long, default_value_t = 5)]
    nx: usize,
    /// Qubits on the y axis (grid has 2^ny rows)
    #[arg(long, default_value_t = 5)]
    ny: usize,
    /// Comma-separated evolution times; "pi" sugar allowed (e.g. 0,pi/4,pi/2)
    #[arg(long, default_value = "0,pi/4,pi/2")]
    times: String,
    /// Shots per measurement basis and repeat
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// Independent repeats per basis (error bars use their spread)
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Master sampling seed
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Difference scheme: "one-sided-at-boundary" or "periodic-central"
    #[arg(long, default_value = "one-sided-at-boundary")]
    scheme: String,
    /// JSON file with a coherent error model to inject
    #[arg(long)]
    error_model: Option<PathBuf>,
    /// Skip sampling and use exact expectation values
    #[arg(long)]
    exact: bool,
    /// JSON config file; its values override the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Artifact directory to create
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Artifact directory written by `run`
    dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Artifact directory to create
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated qubits to target one at a time (fixed models only;
    /// defaults to the model's own targets)
    #[arg(long)]
    qubits: Option<String>,
    /// Seeds to sweep: comma-separated list or a range like 0..20
    #[arg(long)]
    seeds: Option<String>,
}

#[derive(Args)]
struct PlanArgs {
    /// Qubits on the x axis
    #[arg(long, default_value_t = 5)]
    nx: usize,
    /// Qubits on the y axis
    #[arg(long, default_value_t = 5)]
    ny: usize,
    /// Difference scheme for the momentum observables
    #[arg(long, default_value = "one-sided-at-boundary")]
    scheme: String,
    /// Write plan.json here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CircuitArgs {
    /// Initial condition: "diverging" or "vortex"
    #[arg(long, default_value = "diverging")]
    flow: String,
    /// Qubits on the x axis
    #[arg(long, default_value_t = 5)]
    nx: usize,
    /// Qubits on the y axis
    #[arg(long, default_value_t = 5)]
    ny: usize,
    /// Comma-separated evolution times; "pi" sugar allowed
    #[arg(long, default_value = "0,pi/4,pi/2")]
    times: String,
    /// JSON file with a coherent error model to inject
    #[arg(long)]
    error_model: Option<PathBuf>,
    /// Directory to write circuits into
    #[arg(long)]
    out: PathBuf,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Run(args) => {
            let cfg = RunConfig::from_args(&args.common)?;
            run::cmd_run(&cfg, &args.out)
        }
        Cmd::Report(args) => report::cmd_report(&args.dir),
        Cmd::NoiseSweep(args) => {
            let cfg = RunConfig::from_args(&args.common)?;
            let spec = sweep::SweepSpec::parse(args.qubits.as_deref(), args.seeds.as_deref())?;
            sweep::cmd_noise_sweep(&cfg, &spec, &args.out)
        }
        Cmd::Plan(args) => run::cmd_plan(args.nx, args.ny, &args.scheme, args.out.as_deref()),
        Cmd::Circuit(args) => run::cmd_circuit(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
