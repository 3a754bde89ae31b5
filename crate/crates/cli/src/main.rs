//! `vnball`: validation, bounds, and lower-bound search from the shell.
//!
//! Exit codes: 0 success, 1 numeric or check failure, 2 usage or input error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CheckArgs, Example1Args, Lemma41Args, Report, SearchArgs, UpperArgs};

#[derive(Parser, Debug)]
#[command(name = "vnball", version, about = "von Neumann inequality constants on the ball: checks, bounds and search")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write a run manifest (config echo, versions, timestamps, summary) here.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rebuild the printed counterexample tuple and check its claims.
    Example1(Example1Args),
    /// Check a tuple file: commutativity, row contraction, spectral data.
    Check(CheckArgs),
    /// Upper bound from the normalized block estimate.
    Upper(UpperArgs),
    /// Supremum of the polynomial family over normalized blocks.
    Lemma41(Lemma41Args),
    /// Monte Carlo lower-bound search.
    Search(SearchArgs),
    /// Re-run a manifest and compare the summary.
    Replay {
        manifest: PathBuf,
    },
}

/// Exit code plus a message for failures that stop a command early.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<vnball::Error> for Failure {
    fn from(e: vnball::Error) -> Self {
        use vnball::Error as E;
        let code = match e {
            E::Io(_) | E::Json(_) | E::ParamOutOfRange(_) | E::Dimension(_) | E::MalformedChain(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn dispatch(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Example1(a) => commands::example1(&a),
        Command::Check(a) => commands::check(&a),
        Command::Upper(a) => commands::upper(&a),
        Command::Lemma41(a) => commands::lemma41(&a),
        Command::Search(a) => commands::search(&a),
        Command::Replay { manifest } => manifest::replay(&manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = manifest::unix_ms();
    match dispatch(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("report is serializable"));
            } else {
                print!("{}", report.text);
            }
            if let Some(path) = &cli.manifest {
                if let Some(run) = &report.run {
                    if let Err(e) = manifest::write(path, run, started) {
                        eprintln!("error: cannot write manifest: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
