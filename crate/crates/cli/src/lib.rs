//! The `andoyer` command-line tool.
//!
//! * `verify` runs the canonicity suite and writes one report per check;
//! * `simulate` integrates free rotation in Andoyer variables and writes a trajectory CSV;
//! * `convert` maps a state between the Euler and Andoyer charts.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error, 3 the simulation reached
//! the singular band, 4 the requested state is a chart singularity.

mod convert;
pub mod format;
mod simulate;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use andoyer_core::body::{random_body, BodyFile, PointMassBody};
use andoyer_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SINGULAR_BAND: u8 = 3;
pub const EXIT_CHART_SINGULAR: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "andoyer", version, about = "Andoyer variables: canonicity checks, free rotation, chart conversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the canonicity checks over seeded random fixtures.
    Verify(verify::VerifyArgs),
    /// Integrate torque-free rotation in Andoyer variables.
    Simulate(simulate::SimulateArgs),
    /// Convert a state between the Euler and Andoyer charts.
    Convert(convert::ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Body given by file, or drawn at random.
#[derive(Debug, Clone, Args)]
pub struct BodyArgs {
    /// JSON file `{"masses": [..], "positions": [[x, y, z], ..]}`.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["masses", "scale"])]
    pub body_file: Option<PathBuf>,
    /// Number of point masses in a random body.
    #[arg(long, value_name = "N")]
    pub masses: Option<usize>,
    /// Radius of the ball random masses are placed in.
    #[arg(long, value_name = "R")]
    pub scale: Option<f64>,
}

#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    ChartSingular(String),
    SingularBand,
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ChartSingular { .. } => Failure::ChartSingular(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub(crate) type Outcome = std::result::Result<(), Failure>;

pub(crate) fn read_body(path: &Path) -> Result<PointMassBody<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(BodyFile::parse(&text)?.to_body()?)
}

impl BodyArgs {
    /// `None` when no source was given.
    pub(crate) fn resolve(&self, seed: u64) -> Result<Option<PointMassBody<f64>>, Failure> {
        if let Some(path) = &self.body_file {
            return read_body(path).map(Some);
        }
        match (self.masses, self.scale) {
            (None, None) => Ok(None),
            (n, s) => Ok(Some(random_body(seed, n.unwrap_or(5), s.unwrap_or(1.0))?)),
        }
    }
}

pub(crate) fn fixed<const N: usize>(name: &str, values: &[f64]) -> Result<[f64; N], Failure> {
    <[f64; N]>::try_from(values)
        .map_err(|_| Failure::Usage(format!("--{name} takes {N} comma-separated numbers, got {}", values.len())))
}

pub(crate) fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Verify(a) => verify::run(a, stdout),
        Command::Simulate(a) => simulate::run(a, stdout),
        Command::Convert(a) => convert::run(a, stdout),
    };
    let _ = stdout.flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::ChecksFailed) => EXIT_CHECK_FAILED,
        Err(Failure::SingularBand) => {
            let _ = writeln!(stderr, "error: |L| entered the singular band; trajectory truncated");
            EXIT_SINGULAR_BAND
        }
        Err(Failure::ChartSingular(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_CHART_SINGULAR
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
