//! Command-line driver for the `clocksync` toolkit.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when an oracle check or
//! a scaling fit falls outside tolerance (the report is still written).

pub mod commands;
pub mod config;
pub mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{load_config, Flags, RunConfig};
use crate::document::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] clocksync::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

#[derive(Parser, Debug)]
#[command(name = "clocksync", version, about = "Entanglement-assisted clock synchronization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// File of key=value lines; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Outcome classes with probabilities and parities
    Dist,
    /// Parity expectation over a grid of phases
    Sweep,
    /// Closed-form and finite-difference Fisher information
    Fisher,
    /// Simulate one experiment, estimate |Y|, and measure the RMSE over trials
    Simulate,
    /// Apply the synchronization criterion to a simulated singlet run
    Judge,
    /// RMSE against N with a log-log slope fit
    Scaling,
    /// Compare the closed forms with the state-vector simulation
    OracleCheck,
}

impl Command {
    fn default_format(self) -> Format {
        match self {
            Command::Dist | Command::Sweep | Command::Scaling => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<commands::Outcome, CliError> {
    match command {
        Command::Dist => commands::dist(cfg),
        Command::Sweep => commands::sweep(cfg),
        Command::Fisher => commands::fisher(cfg),
        Command::Simulate => commands::simulate(cfg),
        Command::Judge => commands::judge(cfg),
        Command::Scaling => commands::scaling(cfg),
        Command::OracleCheck => commands::oracle_check(cfg),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run_cli(cli, stdout) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn run_cli(cli: Cli, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => Flags::default(),
    };
    let cfg = RunConfig::from_flags(cli.flags.or(file));
    let outcome = execute(cli.command, &cfg)?;
    let text = outcome.document.render(cfg.format.unwrap_or(cli.command.default_format()));
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?,
    }
    Ok(!outcome.check_failed)
}
