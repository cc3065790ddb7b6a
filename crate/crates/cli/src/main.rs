//! `stefan`: solve, tabulate, verify and sweep similarity solutions of the
//! one-phase Stefan problem.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 solver error,
//! 4 verification failure, 1 I/O error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "stefan", version, about = "Similarity solutions of a one-phase Stefan problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `section.key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV output (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for λ and write summary.csv.
    Solve(Common),
    /// Write temperature profiles at the given times to profile.csv.
    Profile {
        #[command(flatten)]
        common: Common,
        /// Comma-separated list of positive times, in seconds.
        #[arg(long = "t")]
        times: String,
        /// Points per profile, including both ends.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Run the invariant checks and the oracle comparison; write verify.csv.
    Verify(Common),
    /// Solve over the sweep.* lists and write sweep.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(c) => commands::solve(&config::load(&c.config)?, &c.out),
        Command::Profile { common, times, points } => {
            let cfg = config::load(&common.config)?;
            let times = commands::parse_times(&times)?;
            commands::profile(&cfg, &common.out, &times, points)
        }
        Command::Verify(c) => commands::verify(&config::load(&c.config)?, &c.out),
        Command::Sweep { common, workers } => commands::sweep(&config::load(&common.config)?, &common.out, workers),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
