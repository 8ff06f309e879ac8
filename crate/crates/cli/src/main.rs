//! `spectra`: command-line front end for spectra-core.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 inconclusive or budget
//! exhausted, 64 usage or malformed input.

mod commands;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use emit::Format;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "spectra", version, about = "Spectral sets of finite unions of intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct OmegaSource {
    /// Interval union file: {"intervals": [[left, right], ...]}.
    #[arg(long)]
    pub omega: Option<PathBuf>,
    /// The same JSON given inline.
    #[arg(long = "omega-inline", value_name = "JSON")]
    pub omega_inline: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Directory receiving one file per requested format.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated list from json, csv, svg.
    #[arg(long, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Record the wall-clock time in JSON output.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified zeros of the Fourier transform on (−R, R).
    Zeros {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long, default_value_t = 10.5, value_parser = positive)]
        radius: f64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Values of χ̂ and g at the given frequencies.
    Eval {
        #[command(flatten)]
        omega: OmegaSource,
        /// Frequencies, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Vec<f64>,
        /// Evenly spaced frequencies `from,to,count`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        range: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Orthogonality of a candidate spectrum.
    VerifySpectrum {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, default_value_t = spectra_core::verify::DEFAULT_ORTHOGONALITY_TOL, value_parser = positive)]
        tol: f64,
        /// Periodic sets are unrolled over [−R, R].
        #[arg(long, default_value_t = 20.0, value_parser = positive)]
        radius: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Tiling identity Σ|χ̂(x−λ)|² = |Ω|², or translational tiling with --translations.
    VerifyTile {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, default_value_t = spectra_core::verify::DEFAULT_TILING_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long = "grid-step", default_value_t = 0.01, value_parser = positive)]
        grid_step: f64,
        /// Check that the translates Ω + λ cover the line exactly once instead.
        #[arg(long)]
        translations: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Membership of points in the spectrum spanned by a generating basis.
    Membership {
        #[command(flatten)]
        omega: OmegaSource,
        /// Reference window of the spectrum.
        #[arg(long)]
        lambda: PathBuf,
        /// Points to test, comma-separated; `p/q` keeps them exact.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        x: Vec<String>,
        #[arg(long, default_value_t = 1e-8, value_parser = positive)]
        tol: f64,
        #[arg(long = "rank-tol", default_value_t = spectra_core::phi::DEFAULT_RANK_TOL, value_parser = positive)]
        rank_tol: f64,
        #[arg(long, default_value_t = 20.0, value_parser = positive)]
        radius: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest width whose anchored windows are generating.
    GeneratingSet {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long = "rank-tol", default_value_t = spectra_core::phi::DEFAULT_RANK_TOL, value_parser = positive)]
        rank_tol: f64,
        #[arg(long, default_value_t = 20.0, value_parser = positive)]
        radius: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Period of a spectrum window from repeated fingerprints.
    Period {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long)]
        lambda: PathBuf,
        /// Fingerprint width; defaults to the generating width.
        #[arg(long)]
        width: Option<String>,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        #[arg(long = "rank-tol", default_value_t = spectra_core::phi::DEFAULT_RANK_TOL, value_parser = positive)]
        rank_tol: f64,
        #[arg(long, default_value_t = 20.0, value_parser = positive)]
        radius: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Backtracking search for periodic spectra containing 0.
    Search {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long = "max-period", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        max_period: u32,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Tolerance of the final tiling verification.
        #[arg(long, default_value_t = spectra_core::verify::DEFAULT_TILING_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long = "grid-step", default_value_t = 0.05, value_parser = positive)]
        grid_step: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Orthogonality, tiling and period checks in one report.
    Report {
        #[command(flatten)]
        omega: OmegaSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, default_value_t = spectra_core::verify::DEFAULT_TILING_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long = "grid-step", default_value_t = 0.01, value_parser = positive)]
        grid_step: f64,
        #[arg(long, default_value_t = 20.0, value_parser = positive)]
        radius: f64,
        #[command(flatten)]
        output: Output,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive finite number")),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<spectra_core::Error> for CliError {
    fn from(e: spectra_core::Error) -> Self {
        use spectra_core::Error as E;
        match e {
            E::EmptyInput
            | E::DegenerateInterval { .. }
            | E::MixedRepresentation
            | E::InvalidParameter(_)
            | E::NotRational(_)
            | E::Format(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SPECTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SPECTRA_THREADS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    use commands as c;
    match command {
        Command::Zeros { omega, radius, tol, output } => c::zeros(&omega, radius, tol, &output),
        Command::Eval { omega, xi, range, output } => c::eval(&omega, xi, &range, &output),
        Command::VerifySpectrum { omega, lambda, tol, radius, output } => {
            c::verify_spectrum(&omega, &lambda, tol, radius, &output)
        }
        Command::VerifyTile { omega, lambda, tol, grid_step, translations, output } => {
            c::verify_tile(&omega, &lambda, tol, grid_step, translations, &output)
        }
        Command::Membership { omega, lambda, x, tol, rank_tol, radius, output } => {
            c::membership(&omega, &lambda, &x, tol, rank_tol, radius, &output)
        }
        Command::GeneratingSet { omega, lambda, rank_tol, radius, output } => {
            c::generating_set(&omega, &lambda, rank_tol, radius, &output)
        }
        Command::Period { omega, lambda, width, tol, rank_tol, radius, output } => {
            c::period(&omega, &lambda, width.as_deref(), tol, rank_tol, radius, &output)
        }
        Command::Search { omega, max_period, budget, tol, grid_step, output } => {
            c::search(&omega, max_period, budget, tol, grid_step, &output)
        }
        Command::Report { omega, lambda, tol, grid_step, radius, output } => {
            c::report(&omega, &lambda, tol, grid_step, radius, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads().and_then(|()| dispatch(cli.command));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("spectra: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("spectra: {msg}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}
