//! Command-line front end for the `imgtorque` library.
//!
//! Every subcommand is a thin wrapper around one library operation. Exit
//! codes: 0 success, 1 usage error, 2 I/O error, 3 numeric or validation
//! error.

pub mod bench;
mod commands;
pub mod render;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::*;

/// Environment variable that sets the worker thread count.
pub const THREADS_ENV: &str = "IMGTORQUE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("invalid: {0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<imgtorque::Error> for CliError {
    fn from(e: imgtorque::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "imgtorque",
    version,
    about = "Torque maps, volumes, extrema and their applications for grayscale images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect an oriented edge map, or import one from an external strength map
    Edges(EdgesArgs),
    /// Torque map for a single patch side
    Map(MapArgs),
    /// Torque volume over a list of patch sides
    Volume(VolumeArgs),
    /// Value and scale maps of a torque volume
    Reduce(ReduceArgs),
    /// Space-scale extrema of a torque volume
    Extrema(ExtremaArgs),
    /// Saliency map from torque extrema, optionally blended with an external map
    Saliency(SaliencyArgs),
    /// Strengthened edges from boundary strength and edge contribution
    Strengthen(StrengthenArgs),
    /// Gradient torque of a disk, by direct summation and by disk means
    Gradtorque(GradTorqueArgs),
    /// Multiscale torque descriptors of extremal patches
    Describe(DescribeArgs),
    /// Precision, recall and F-measure of a map against a ground truth mask
    Eval(EvalArgs),
    /// Red/blue rendering of a signed map
    Render(RenderArgs),
    /// Per-pixel timing of the fast torque map across patch sides
    Bench(BenchArgs),
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("imgtorque: {e}");
        return e.exit_code();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("imgtorque: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={value} is not a positive integer")))?;
    // a second call in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Edges(a) => cmd_edges(&a),
        Command::Map(a) => cmd_map(&a),
        Command::Volume(a) => cmd_volume(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Extrema(a) => cmd_extrema(&a),
        Command::Saliency(a) => cmd_saliency(&a),
        Command::Strengthen(a) => cmd_strengthen(&a),
        Command::Gradtorque(a) => cmd_gradtorque(&a),
        Command::Describe(a) => cmd_describe(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

/// Path of the JSON sidecar recorded next to `output`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".run.json");
    output.with_file_name(name)
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a C,
    resolved: R,
}

/// Writes the run configuration, plus any values resolved from defaults,
/// to `<output>.run.json`.
pub(crate) fn write_sidecar<C: Serialize, R: Serialize>(
    output: &Path,
    command: &str,
    config: &C,
    resolved: R,
) -> CliResult<()> {
    let record = Sidecar {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        resolved,
    };
    let mut text = serde_json::to_string_pretty(&record)?;
    text.push('\n');
    fs::write(sidecar_path(output), text)?;
    Ok(())
}
