use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
mod inputs;
mod report;

#[derive(Parser, Debug)]
#[command(
    name = "hklab",
    version,
    about = "Exact Hilbert-Kunz and lattice-cone experiments"
)]
struct Cli {
    /// Write a JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write the result table as CSV to this file.
    #[arg(long, global = true, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Worker threads for per-prime and per-e fan-out.
    #[arg(long, global = true, env = "HKLAB_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert-Kunz function of an ideal, e = 0..emax.
    HkIdeal(HkIdealArgs),
    /// Check the module-to-ideal reduction on a block-diagonal fixture.
    HkReduce(HkReduceArgs),
    /// Antiample/ample thresholds and positive-cone boundary.
    ConeThreshold(ConeArgs),
    /// Orbit of a class under a lattice isometry.
    ConeOrbit(OrbitArgs),
    /// Closed-form limit for a split bundle plus Betti table.
    LimitSplitting(SplittingArgs),
    /// Exact summation oracle against the closed-form surface limit.
    LimitOracle(OracleArgs),
    /// Determinant of a 4x4 matrix of linear forms.
    QuarticDet(MatrixArgs),
    /// Primes at which the determinantal quartic is singular.
    QuarticScan(ScanArgs),
    /// Signed curve minors and membership of the quartic in their ideal.
    QuarticMinors(MinorsArgs),
}

#[derive(Args, Debug)]
pub struct HkIdealArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u64>,
    /// Variable names, comma separated.
    #[arg(long, default_value = "X,Y,Z,W")]
    pub vars: String,
    /// Ring relations, comma separated.
    #[arg(long, default_value = "")]
    pub ring: String,
    /// Ideal generators, comma separated.
    #[arg(long)]
    pub ideal: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub emax: u32,
    /// Krull dimension; defaults to #vars - #relations.
    #[arg(long)]
    pub dim: Option<u32>,
    /// JSON descriptor {p, variables, relations, ideal, e_max, dim?} used instead of the flags.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["p", "ideal"])]
    pub experiment: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HkReduceArgs {
    /// One of: cyclic, residue-pair.
    #[arg(long, default_value = "cyclic")]
    pub fixture: String,
    /// Frobenius exponents: "a..b" or a list.
    #[arg(long, default_value = "0..3")]
    pub e: String,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    /// quadric or quartic-lattice.
    #[arg(long, conflicts_with = "gram")]
    pub preset: Option<String>,
    /// Gram matrix, rows separated by ';'.
    #[arg(long, requires = "h", allow_hyphen_values = true)]
    pub gram: Option<String>,
    /// Polarization class.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConeArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Line bundle classes (repeatable).
    #[arg(long = "l", allow_hyphen_values = true)]
    pub l: Vec<String>,
    /// Second class for the positive-cone boundary of H + tD.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Isometry, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Also search for a nonzero (n1, n2) and m with Q(n1, n2) = c m^2.
    #[arg(long, allow_hyphen_values = true)]
    pub represents: Option<i64>,
    /// Bound on |n_i| and m for the search.
    #[arg(long, default_value_t = 100)]
    pub bound: i64,
}

#[derive(Args, Debug)]
pub struct SplittingArgs {
    #[arg(long, default_value = "quadric")]
    pub preset: String,
    /// Instead, a Koszul complex on forms of these degrees over the quadric.
    #[arg(long)]
    pub koszul: Option<String>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long = "l", allow_hyphen_values = true)]
    pub l: Option<String>,
    #[arg(long, default_value = "16,64,256,1024,4096")]
    pub n: String,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    /// brinkmann or fggl.
    #[arg(long, conflicts_with = "matrix")]
    pub preset: Option<String>,
    /// JSON file holding a 4x4 array of linear forms in X, Y, Z, W.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: MatrixArgs,
    /// "a..b" for all primes in [a, b], or a list.
    #[arg(long)]
    pub primes: String,
    /// Test only this many primes drawn from --primes.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MinorsArgs {
    #[command(flatten)]
    pub source: MatrixArgs,
    /// Primes for the membership check.
    #[arg(long, default_value = "2,3,101")]
    pub primes: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

pub fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    match &cli.command {
        Command::HkIdeal(a) => commands::hk_ideal(a),
        Command::HkReduce(a) => commands::hk_reduce(a),
        Command::ConeThreshold(a) => commands::cone_threshold(a),
        Command::ConeOrbit(a) => commands::cone_orbit(a),
        Command::LimitSplitting(a) => commands::limit_splitting(a),
        Command::LimitOracle(a) => commands::limit_oracle(a),
        Command::QuarticDet(a) => commands::quartic_det(a),
        Command::QuarticScan(a) => commands::quartic_scan(a),
        Command::QuarticMinors(a) => commands::quartic_minors(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {}", msg);
            return ExitCode::from(2);
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("computation failed: {}", msg);
            return ExitCode::from(1);
        }
    };
    let runtime_ms = start.elapsed().as_millis();
    let mut out = io::stdout().lock();
    let written = report
        .write_text(&mut out)
        .and_then(|_| out.flush())
        .and_then(|_| {
            cli.json
                .as_ref()
                .map_or(Ok(()), |p| report.write_json(p, runtime_ms))
        })
        .and_then(|_| cli.csv.as_ref().map_or(Ok(()), |p| report.write_csv(p)));
    if let Err(e) = written {
        eprintln!("error: {}", e);
        return ExitCode::from(1);
    }
    if let Some(msg) = &report.trap {
        eprintln!("consistency check failed: {}", msg);
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
