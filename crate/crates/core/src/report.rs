//! Result record shared by the three estimation pipelines.

use serde::{Deserialize, Serialize};

use crate::phase::{BitString, PhaseFraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Kitaev,
    Acpa,
    Fpe,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Kitaev => f.write_str("kitaev"),
            Algorithm::Acpa => f.write_str("acpa"),
            Algorithm::Fpe => f.write_str("fpe"),
        }
    }
}

/// Anomalies observed during a run that did not abort it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFlag {
    /// Bit inference hit a distance tie (resolved toward 0).
    InferenceTie,
    /// An even majority vote split evenly (resolved toward 0).
    MajorityTie,
    /// Round-1 filtering emptied the candidate set; inference fell back to
    /// the unfiltered minimizer.
    Round1Fallback,
}

/// Outcome of one full estimation run, with resource tallies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateReport {
    pub algorithm: Algorithm,
    /// Recovered bits, most significant first.
    pub bits: BitString,
    /// The recovered bits as an exact phase.
    pub phase: PhaseFraction,
    /// Trial count per estimation unit (per multiple, per bit, or per record).
    pub trials_per_unit: u64,
    /// Total measurement count.
    pub measurements: u64,
    /// Exact tally of controlled-U applications.
    pub u_invocations: u128,
    /// Closed-form model of the U tally, when it differs from the exact one.
    pub u_invocations_model: Option<f64>,
    /// Exact tally of constant-precision rotation gates.
    pub rotation_invocations: u128,
    pub flags: Vec<ReportFlag>,
}

impl EstimateReport {
    /// Whether the recovered phase lands strictly within `2^-bits` of `truth`.
    pub fn succeeds(&self, truth: &PhaseFraction, bits: u32) -> bool {
        self.phase.within(truth, bits)
    }
}
