//! Command-line front end: `solve`, `verify` and `sweep`.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod plan;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use modica_core::InitMode;

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "modica",
    version,
    about = "Symmetric periodic minimizers of a coupled two-well energy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    /// The exact eps = 0 profile.
    Gl,
    /// The exact profile plus seeded uniform noise.
    Random,
}

impl From<Init> for InitMode {
    fn from(i: Init) -> Self {
        match i {
            Init::Gl => InitMode::GlProfile,
            Init::Random => InitMode::RandomPerturbed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize, extend to a full period, verify, and write the results.
    /// Exit 0: certified; 2: solved but not certified; 1: input error.
    Solve {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        eps: f64,
        /// Odd number of quarter-period grid nodes.
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Init::Gl)]
        init: Init,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the report from a solution.csv alone and print it as JSON.
    /// Exit 0: certificate reproduced; 2: corrupt or not certified; 1: unreadable.
    Verify {
        csv: PathBuf,
        /// Coupling to use instead of inferring it from the W column.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run a parameter study described by a plan file.
    Sweep { plan: PathBuf },
}

/// Writes a line to stdout, ignoring a closed pipe.
pub(crate) fn say(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Solve {
            theta,
            eps,
            grid,
            seed,
            init,
            out,
        } => commands::solve(theta, eps, grid, seed, init.into(), &out).map(|s| s.exit_code()),
        Command::Verify { csv, eps } => commands::verify(&csv, eps).and_then(|(report, status)| {
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Input(format!("serialising report: {e}")))?;
            say(&text);
            if status != commands::Status::Certified {
                eprintln!("certificate not reproduced");
            }
            Ok(status.exit_code())
        }),
        Command::Sweep { plan } => commands::sweep(&plan).map(|_| 0),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
