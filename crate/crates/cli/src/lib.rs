//! Library backing the `cppe` binary: argument surface, campaign execution,
//! record persistence and table emission.

pub mod args;
pub mod error;
pub mod record;
pub mod simulate;
pub mod tables;

use std::io::Write;
use std::path::Path;

use args::{Cli, Command, Format};
use error::{CliError, Result};

/// Executes a parsed invocation and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Calibrate(a) => {
            let (text, all_pass) = tables::calibrate_output(a)?;
            emit(a.out.as_deref(), &text)?;
            Ok(if a.strict && !all_pass { 1 } else { 0 })
        }
        Command::Simulate(a) => {
            let campaign = simulate::resolve(a)?;
            let (records, summary) = simulate::run_campaign(&campaign)?;
            let text = match a.format.unwrap_or(Format::Jsonl) {
                Format::Jsonl => record::to_jsonl(&records, &summary)?,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&serde_json::json!({
                        "records": records,
                        "summary": summary,
                    }))?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    return Err(CliError::Usage(
                        "simulate records are mixed-schema; use jsonl or json".into(),
                    ))
                }
            };
            emit(a.out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Sweep(a) => {
            emit(a.out.as_deref(), &tables::sweep_output(a)?)?;
            Ok(0)
        }
        Command::Cost(a) => {
            emit(a.out.as_deref(), &tables::cost_output(a)?)?;
            Ok(0)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Maps an error to the documented exit code: 2 for usage and environment
/// problems (1 is reserved for strict-mode regression failures).
pub fn exit_code(_err: &CliError) -> i32 {
    2
}
