use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use weylpath_cli::runs::{
    run_bruteforce, run_fields, run_scatter, run_wavelet, run_weyl_check, Report,
};
use weylpath_cli::{CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "weylpath",
    version,
    about = "Complex-probability path sums on finite Weyl grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration, one `key = value` per line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV files [default: current directory;
    /// weyl-check writes none unless given].
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Residuals of the Weyl-algebra identities.
    WeylCheck {
        /// Hilbert-space dimension M.
        #[arg(long)]
        dim: Option<usize>,
        /// Qbit count L, for M = 2^L.
        #[arg(long)]
        qbits: Option<usize>,
    },
    /// Gaussian-packet scattering and the half-shell T-matrix.
    Scatter,
    /// Two-mode field evolution.
    Fields,
    /// Scaling-function coefficients and overlap tables.
    Wavelet,
    /// Explicit sums over all phase-space paths.
    Bruteforce,
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match &cli.command {
        Command::WeylCheck { dim, qbits } => run_weyl_check(*dim, *qbits, cli.out.as_deref()),
        Command::Scatter => run_scatter(load(&cli.config)?, &out),
        Command::Fields => run_fields(load(&cli.config)?, &out),
        Command::Wavelet => run_wavelet(load(&cli.config)?, &out),
        Command::Bruteforce => run_bruteforce(load(&cli.config)?, cli.seed, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            for f in &report.files {
                log::info!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
