//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cppe_core::{Algorithm, GateMode};

#[derive(Parser, Debug)]
#[command(name = "cppe", version, about = "Phase-estimation simulators and cost models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive every repetition constant and check it against its target.
    Calibrate(CalibrateArgs),
    /// Run seeded Monte Carlo estimation campaigns.
    Simulate(SimulateArgs),
    /// Emit a ratio grid between two methods.
    Sweep(SweepArgs),
    /// Emit the closed-form resource table for one method.
    Cost(CostArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Jsonl,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Perfect,
    Imperfect,
}

impl From<Mode> for GateMode {
    fn from(m: Mode) -> GateMode {
        match m {
            Mode::Perfect => GateMode::Perfect,
            Mode::Imperfect => GateMode::Imperfect,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Perfect => f.write_str("perfect"),
            Mode::Imperfect => f.write_str("imperfect"),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Kitaev,
    Acpa,
    Fpe,
}

impl From<Method> for Algorithm {
    fn from(m: Method) -> Algorithm {
        match m {
            Method::Kitaev => Algorithm::Kitaev,
            Method::Acpa => Algorithm::Acpa,
            Method::Fpe => Algorithm::Fpe,
        }
    }
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    /// Exit nonzero if any derived constant misses its tolerance.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub algorithm: Option<Method>,
    /// Target bit precision.
    #[arg(long)]
    pub n: Option<u32>,
    /// Phase-shift degree (ACPA).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Per-rotation angle error; defaults to 1/((k-1) 2^k) in imperfect mode.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Phase source: an explicit "0.bits" string, "random", or "grid".
    #[arg(long)]
    pub phase: Option<String>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML experiment description; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "kitaev")]
    pub method_a: Method,
    #[arg(long, value_enum, default_value = "acpa")]
    pub method_b: Method,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 100)]
    pub n_max: u32,
    #[arg(long, default_value_t = 3)]
    pub k_min: u32,
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    #[arg(long, value_enum, default_value = "perfect")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CostArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Elementary gates per controlled-U.
    #[arg(long, default_value_t = 1)]
    pub gamma: u64,
    /// Rotation-synthesis exponent.
    #[arg(long = "c-exponent", default_value_t = 1.0)]
    pub c_exponent: f64,
    #[arg(long, value_enum, default_value = "perfect")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
