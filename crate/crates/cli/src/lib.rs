//! The `cext` command line: argument parsing, dispatch and exit codes.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod report;

pub use report::{CliError, Report};

/// Exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cext", version, about = "Central extensions of finite groups and loop-group cocycle checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Second cohomology H²(G; Z/n) with class representatives.
    H2(FiniteArgs),
    /// Build the extension of a cocycle and print its table.
    Extend(ExtendArgs),
    /// Group the classes of H²(G; Z/n) by extension fingerprint.
    Classify(FiniteArgs),
    /// Run the loop-group identity battery over seeded trials.
    Verify(VerifyArgs),
    /// Period of R over the standard 2-sphere of loops in SU(2).
    Period(PeriodArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiniteArgs {
    /// Group table file.
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub modulus: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[arg(long)]
    pub group: PathBuf,
    /// Degree-2 cochain file.
    #[arg(long)]
    pub cochain: PathBuf,
    /// Must match the cochain file's modulus when given.
    #[arg(long)]
    pub modulus: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Test hook: use −α in the dα evaluation.
    #[arg(long)]
    pub negate_alpha: bool,
    /// Tolerance override `NAME=VALUE`, repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    /// Simpson intervals in u by trapezoid nodes in φ.
    #[arg(long, default_value = "64x64")]
    pub grid: String,
    /// Test hook: loops constant in θ.
    #[arg(long)]
    pub degenerate: bool,
    /// Test hook: traverse the sphere with φ → −φ.
    #[arg(long)]
    pub reverse_orientation: bool,
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::H2(a) => commands::h2(a),
        Command::Extend(a) => commands::extend(a),
        Command::Classify(a) => commands::classify(a),
        Command::Verify(a) => commands::verify(a),
        Command::Period(a) => commands::period(a),
    }
}

fn out_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::H2(a) | Command::Classify(a) => a.output.out.as_ref(),
        Command::Extend(a) => a.output.out.as_ref(),
        Command::Verify(a) => a.output.out.as_ref(),
        Command::Period(a) => a.output.out.as_ref(),
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cext: {e}");
            return e.exit_code();
        }
    };
    if let Some(path) = out_path(&cli) {
        if let Err(e) = report.write(path) {
            eprintln!("cext: {e}");
            return e.exit_code();
        }
    }
    print!("{}", report.summary());
    println!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}
