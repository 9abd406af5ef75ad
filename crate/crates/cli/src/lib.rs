//! Command-line front end: spectra, single cycles, sweeps, complete-cycle
//! audits, verification runs and figure datasets, all as CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use spin_otto::SpinPair;
use thiserror::Error;

mod commands;
pub mod config;
mod figures;
pub mod format;

pub use figures::FIGURE_NAMES;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN_WARNING: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] spin_otto::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "spin-otto",
    version,
    about = "Quantum Otto engine with two Heisenberg-coupled spins",
    after_help = "Every subcommand also accepts --config FILE with key=value lines; \
                  command-line flags override values from the file."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels in canonical (or energy) order.
    Spectrum(SpectrumArgs),
    /// Average heat, work and efficiency of one cycle.
    Cycle(CycleArgs),
    /// Cycle reports over a grid of pairs, fields, temperatures and couplings.
    Sweep(SweepArgs),
    /// Every complete Otto cycle between two levels, with a second-law audit.
    Coc(CycleArgs),
    /// Oracle comparison and randomized lemma suite; exit 1 on any counterexample.
    Verify(VerifyArgs),
    /// Writes the built-in figure datasets.
    Figures(FiguresArgs),
}

fn half(text: &str) -> Result<u32, String> {
    format::parse_half_integer(text)
}

#[derive(Debug, Args)]
#[allow(non_snake_case)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = half)]
    pub s1: u32,
    #[arg(long, value_parser = half)]
    pub s2: u32,
    #[arg(long = "B")]
    pub b: f64,
    #[arg(long = "J", default_value_t = 0.0)]
    pub j: f64,
    /// Order rows by energy instead of canonical index.
    #[arg(long)]
    pub sorted: bool,
    /// Compare level order against a second field, written `B2=<v>`.
    #[arg(long, value_name = "B2=<v>")]
    pub check_crossing: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[arg(long, value_parser = half)]
    pub s1: u32,
    #[arg(long, value_parser = half)]
    pub s2: u32,
    #[arg(long = "B1")]
    pub b1: f64,
    #[arg(long = "B2")]
    pub b2: f64,
    #[arg(long = "T1")]
    pub t1: f64,
    #[arg(long = "T2")]
    pub t2: f64,
    #[arg(long = "J", default_value_t = 0.0)]
    pub j: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Spin pair `s1,s2`; repeatable.
    #[arg(long, required = true, value_parser = format::parse_pair)]
    pub pair: Vec<SpinPair>,
    #[arg(long = "B1", required = true, value_delimiter = ',')]
    pub b1: Vec<f64>,
    #[arg(long = "B2", required = true, value_delimiter = ',')]
    pub b2: Vec<f64>,
    #[arg(long = "T1", required = true, value_delimiter = ',')]
    pub t1: Vec<f64>,
    #[arg(long = "T2", required = true, value_delimiter = ',')]
    pub t2: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub j_start: f64,
    /// A number, or `jc` / `jx` for the bound of each grid point.
    #[arg(long, default_value = "jc")]
    pub j_stop: String,
    /// Number of J values, both ends included.
    #[arg(long, default_value_t = 101)]
    pub j_steps: usize,
    /// Append `P_k − P'_k` columns for k = 2..n (all pairs must share n).
    #[arg(long)]
    pub populations: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = spin_otto::lemmas::DEFAULT_SEED)]
    pub seed: u64,
    /// Random samples for the lemma suite.
    #[arg(long, default_value_t = spin_otto::lemmas::DEFAULT_POINTS)]
    pub points: usize,
    /// Random (B, J) points per pair for the oracle comparison.
    #[arg(long, default_value_t = 100)]
    pub oracle_points: usize,
    /// Largest product-space dimension in the oracle comparison.
    #[arg(long, default_value_t = 54)]
    pub max_levels: usize,
    /// Multiplies the critical coupling inside the suite (falsifiability check).
    #[arg(long, default_value_t = 1.0, hide = true)]
    pub mutate_jc_scale: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Restrict to one dataset (e.g. `fig2a`); repeatable.
    #[arg(long)]
    pub only: Vec<String>,
    /// J values per curve.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge_config_file(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Spectrum(a) => commands::spectrum(&a, out, err),
        Command::Cycle(a) => commands::cycle(&a, out),
        Command::Sweep(a) => commands::sweep(&a, out),
        Command::Coc(a) => commands::coc(&a, out),
        Command::Verify(a) => commands::verify(&a, out, err),
        Command::Figures(a) => figures::figures(&a, out),
    }
}
