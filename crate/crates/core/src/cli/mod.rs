//! Command-line front end.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kspace_extrap::recon::Method;

use config::{ConfigFile, List};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "kspace-extrap",
    version,
    about = "Partial-Fourier k-space simulation, reconstruction and metrics"
)]
pub struct Cli {
    /// `key = value` file; keys are long flag names. Flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate full spin-echo k-space and the noiseless truth image.
    Simulate(SimulateArgs),
    /// Truncate full k-space to a partial acquisition.
    Mask(MaskArgs),
    /// Reconstruct an image from partial k-space.
    Recon(ReconArgs),
    /// Score an image against the truth (CSV row).
    Metrics(MetricsArgs),
    /// Sweep q for several methods and write per-metric CSVs.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Grid side.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    noise_std: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Spins per voxel.
    #[arg(long)]
    n_spins: Option<usize>,
    #[arg(long)]
    te_ms: Option<f64>,
    #[arg(long)]
    tr_ms: Option<f64>,
    #[arg(long)]
    alpha_deg: Option<f64>,
    #[arg(long)]
    bandwidth_hz: Option<f64>,
    #[arg(long)]
    fov_cm: Option<f64>,
    #[arg(long)]
    delta_t_ms: Option<f64>,
    #[arg(long)]
    out_kspace: Option<PathBuf>,
    #[arg(long)]
    out_truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MaskArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Method parameters shared by `recon` and `compare`.
#[derive(Debug, Args)]
struct MethodArgs {
    /// Predicted phase-encode lines (lp, lp-fixed, lp-proj).
    #[arg(long)]
    steps: Option<usize>,
    /// FIR taps; default m/3.
    #[arg(long)]
    fir_order: Option<usize>,
    #[arg(long)]
    nlm_t: Option<usize>,
    #[arg(long)]
    nlm_f: Option<usize>,
    /// NLM strength; default a tenth of the seed image range.
    #[arg(long)]
    nlm_h: Option<f64>,
    #[arg(long)]
    pocs_iters: Option<usize>,
    #[arg(long)]
    pocs_tol: Option<f64>,
    #[arg(long)]
    fov_cm: Option<f64>,
    #[arg(long)]
    delta_t_ms: Option<f64>,
}

#[derive(Debug, Args)]
struct ReconArgs {
    /// Partial (or full) k-space; samples outside the mask are ignored.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    params: MethodArgs,
    #[arg(long)]
    out_image: Option<PathBuf>,
    #[arg(long)]
    out_kspace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[arg(long)]
    image: Option<PathBuf>,
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Method label written to the CSV row.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// `label row col` lines: contrast ROI a, contrast ROI b, noise ROI.
    #[arg(long)]
    roi: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Full k-space.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    methods: Option<List<Method>>,
    #[arg(long)]
    q_list: Option<List<usize>>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    params: MethodArgs,
    #[arg(long)]
    roi: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            let err = CliError::config(line.trim_start_matches("error: "));
            eprintln!("{err}");
            return err.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> error::CliResult<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Simulate(a) => commands::simulate(a, &file),
        Command::Mask(a) => commands::mask(a, &file),
        Command::Recon(a) => commands::recon(a, &file),
        Command::Metrics(a) => commands::metrics(a, &file),
        Command::Compare(a) => commands::compare(a, &file),
    }
}
