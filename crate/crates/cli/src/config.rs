//! Flag definitions, `key=value` config files and the merged run settings.

use std::path::{Path, PathBuf};

use clap::{Args, Parser};
use clocksync::Protocol;

use crate::document::Format;
use crate::CliError;

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    s.parse()
}

/// Every setting that may come from the command line or a config file.
#[derive(Args, Debug, Clone, Default, PartialEq)]
pub struct Flags {
    /// Entangled resource: bell, ghz or singlet
    #[arg(long, global = true, value_parser = parse_protocol)]
    pub protocol: Option<Protocol>,
    /// Qubits per party
    #[arg(long = "n", global = true)]
    pub n: Option<u32>,
    /// Qubit angular frequency
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Clock offset Y = t_B - t_A
    #[arg(long = "y", global = true, allow_negative_numbers = true)]
    pub y: Option<f64>,
    /// Repetitions per experiment
    #[arg(long, global = true)]
    pub nu: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Simulated experiments per RMSE estimate
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long = "beta-min", global = true, allow_negative_numbers = true)]
    pub beta_min: Option<f64>,
    #[arg(long = "beta-max", global = true, allow_negative_numbers = true)]
    pub beta_max: Option<f64>,
    /// Grid points of a sweep, endpoints included
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Comma-separated list of N for sweep and scaling
    #[arg(long = "n-list", global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    /// Offset of each scaling point as a fraction of its ambiguity window
    #[arg(long = "window-fraction", global = true, allow_negative_numbers = true)]
    pub window_fraction: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Flags {
    /// Field-wise merge where `self` wins.
    pub fn or(self, other: Flags) -> Flags {
        Flags {
            protocol: self.protocol.or(other.protocol),
            n: self.n.or(other.n),
            omega: self.omega.or(other.omega),
            y: self.y.or(other.y),
            nu: self.nu.or(other.nu),
            seed: self.seed.or(other.seed),
            trials: self.trials.or(other.trials),
            beta_min: self.beta_min.or(other.beta_min),
            beta_max: self.beta_max.or(other.beta_max),
            steps: self.steps.or(other.steps),
            n_list: self.n_list.or(other.n_list),
            window_fraction: self.window_fraction.or(other.window_fraction),
            format: self.format.or(other.format),
            out: self.out.or(other.out),
        }
    }
}

#[derive(Parser, Debug)]
#[command(no_binary_name = true, disable_help_flag = true)]
struct FileFlags {
    #[command(flatten)]
    flags: Flags,
}

/// Parses `key = value` lines. Blank lines and `#` comments are ignored; keys
/// are the long flag names, with `_` accepted for `-`.
pub fn parse_config(text: &str) -> Result<Flags, String> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value, got '{line}'", lineno + 1));
        };
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", lineno + 1));
        }
        args.push(format!("--{key}={}", value.trim()));
    }
    FileFlags::try_parse_from(args).map(|f| f.flags).map_err(|e| e.render().to_string().trim_end().to_owned())
}

pub fn load_config(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::Input(format!("config file {}: {e}", path.display())))
}

/// Settings after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub n: u32,
    pub omega: f64,
    pub y: f64,
    pub nu: u64,
    pub seed: u64,
    pub trials: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub n_list: Option<Vec<u32>>,
    pub window_fraction: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_flags(f: Flags) -> RunConfig {
        RunConfig {
            protocol: f.protocol.unwrap_or(Protocol::SymmetricSinglet),
            n: f.n.unwrap_or(2),
            omega: f.omega.unwrap_or(1.0),
            y: f.y.unwrap_or(0.0),
            nu: f.nu.unwrap_or(1000),
            seed: f.seed.unwrap_or(0),
            trials: f.trials.unwrap_or(200),
            beta_min: f.beta_min.unwrap_or(0.0),
            beta_max: f.beta_max.unwrap_or(std::f64::consts::PI),
            steps: f.steps.unwrap_or(181),
            n_list: f.n_list,
            window_fraction: f.window_fraction.unwrap_or(0.3),
            format: f.format,
            out: f.out,
        }
    }
}
