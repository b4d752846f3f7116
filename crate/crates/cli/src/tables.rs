//! Calibrate, sweep and cost emission.

use serde::Serialize;

use cppe_core::cost::{
    elementary_gates, measurements, ratio_surface, synthesis_overhead,
};
use cppe_core::{Algorithm, CalibrationReport, GateMode};

use crate::args::{CalibrateArgs, CostArgs, Format, SweepArgs};
use crate::error::{CliError, Result};

#[derive(Serialize)]
struct CalibrateOutput {
    report: CalibrationReport,
    checks: Vec<cppe_core::calibrate::CheckLine>,
    all_pass: bool,
}

/// Renders the calibration report; the flag says whether every check passed.
pub fn calibrate_output(args: &CalibrateArgs) -> Result<(String, bool)> {
    let report = CalibrationReport::compute()?;
    let checks = report.checks();
    let all_pass = report.all_pass();
    let text = match args.format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&CalibrateOutput { report, checks, all_pass })?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for line in &checks {
                w.serialize(line)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Data(e.to_string()))?)
                .map_err(|e| CliError::Data(e.to_string()))?
        }
        Format::Jsonl => {
            let mut s = String::new();
            for line in &checks {
                s.push_str(&serde_json::to_string(line)?);
                s.push('\n');
            }
            s
        }
    };
    Ok((text, all_pass))
}

pub fn sweep_output(args: &SweepArgs) -> Result<String> {
    if args.n_min > args.n_max || args.k_min > args.k_max {
        return Err(CliError::Usage("empty sweep range".into()));
    }
    let cells = ratio_surface(
        Algorithm::from(args.method_a),
        Algorithm::from(args.method_b),
        args.n_min..=args.n_max,
        args.k_min..=args.k_max,
        GateMode::from(args.mode),
    )?;
    render_rows(&cells, args.format)
}

#[derive(Serialize)]
struct CostRow {
    method: Algorithm,
    n: u32,
    k: u32,
    gamma: u64,
    mode: GateMode,
    measurements: f64,
    u_gates_log2: f64,
    u_gates_exact: Option<String>,
    rotation_model: f64,
    rotation_exact: Option<String>,
    synthesis_exponent: f64,
    synthesis_overhead: f64,
}

pub fn cost_output(args: &CostArgs) -> Result<String> {
    let method = Algorithm::from(args.method);
    let mode = GateMode::from(args.mode);
    let gates = elementary_gates(method, args.n, args.k, args.gamma, mode)?;
    let row = CostRow {
        method,
        n: args.n,
        k: args.k,
        gamma: args.gamma,
        mode,
        measurements: measurements(method, args.n, args.k, mode)?,
        u_gates_log2: gates.kickback_log2,
        u_gates_exact: gates.kickback_exact.map(|v| v.to_string()),
        rotation_model: gates.rotation_model,
        rotation_exact: gates.rotation_exact.map(|v| v.to_string()),
        synthesis_exponent: args.c_exponent,
        synthesis_overhead: synthesis_overhead(args.k.max(3), args.c_exponent)?,
    };
    render_rows(std::slice::from_ref(&row), args.format)
}

fn render_rows<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Data(e.to_string()))?)
                .map_err(|e| CliError::Data(e.to_string()))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            Ok(s)
        }
        Format::Jsonl => {
            let mut s = String::new();
            for row in rows {
                s.push_str(&serde_json::to_string(row)?);
                s.push('\n');
            }
            Ok(s)
        }
    }
}
