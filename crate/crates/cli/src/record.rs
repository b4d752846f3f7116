//! Run-record persistence: JSON Lines with a trailing summary line.

use serde::{Deserialize, Serialize};

use cppe_core::{Algorithm, PhaseFraction, ReportFlag};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// One Monte Carlo repetition. Wall-clock time is deliberately absent so a
/// rerun with the same config and seed is byte-identical.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub rep: u64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub mode: String,
    pub phase_true: PhaseFraction,
    pub estimate: PhaseFraction,
    pub success: bool,
    pub trials_per_unit: u64,
    pub measurements: u64,
    pub u_invocations: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_invocations_model: Option<f64>,
    pub rotation_invocations: u128,
    pub flags: Vec<ReportFlag>,
}

/// Campaign summary with a Wilson 95% interval on the success rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub record: String,
    pub reps: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl Summary {
    pub fn from_counts(successes: u64, reps: u64) -> Self {
        let (lo, hi) = wilson_interval(successes, reps);
        Self {
            schema_version: SCHEMA_VERSION,
            record: "summary".to_string(),
            reps,
            successes,
            success_rate: if reps == 0 { 0.0 } else { successes as f64 / reps as f64 },
            wilson_low: lo,
            wilson_high: hi,
        }
    }
}

/// Wilson 95% score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Serializes records plus summary as JSON Lines.
pub fn to_jsonl(records: &[RunRecord], summary: &Summary) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(summary)?);
    out.push('\n');
    Ok(out)
}

/// Parses a JSON Lines campaign back into records and its stored summary.
pub fn from_jsonl(text: &str) -> Result<(Vec<RunRecord>, Summary)> {
    let mut records = Vec::new();
    let mut summary = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let value: serde_json::Value = serde_json::from_str(line)?;
        if value.get("record").and_then(|v| v.as_str()) == Some("summary") {
            summary = Some(serde_json::from_value(value)?);
        } else {
            records.push(serde_json::from_value(value)?);
        }
    }
    let summary = summary.ok_or_else(|| CliError::Data("missing summary line".into()))?;
    Ok((records, summary))
}

/// Recomputes the summary from the records; a well-formed file round-trips.
pub fn recompute_summary(records: &[RunRecord]) -> Summary {
    let successes = records.iter().filter(|r| r.success).count() as u64;
    Summary::from_counts(successes, records.len() as u64)
}
