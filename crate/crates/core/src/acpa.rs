//! Arbitrary constant-precision estimation: sequential bit recovery from the
//! least significant position upward, with simulated inverse-rotation
//! feedback of the already-known suffix and a per-bit majority vote.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{
    acpa_step_probability, acpa_step_probability_with_shift, NoiseModel,
};
use crate::phase::{BitString, PhaseFraction};
use crate::report::{Algorithm, EstimateReport, ReportFlag};
use crate::trials::{SourceFactory, TrialSource};

/// Whether the phase-shift gates themselves are assumed exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMode {
    Perfect,
    Imperfect,
}

/// Configuration of one constant-precision estimation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcpaConfig {
    /// Target bit precision.
    pub n: u32,
    /// Phase-shift precision degree; the finest rotation is `pi / 2^(k-1)`.
    pub k: u32,
    pub noise: NoiseModel,
    /// Optional fixed per-bit trial count.
    pub trials_override: Option<u64>,
}

impl AcpaConfig {
    pub fn new(n: u32, k: u32) -> Self {
        Self { n, k, noise: NoiseModel::Perfect, trials_override: None }
    }

    /// The trial-count regime implied by the noise model.
    pub fn gate_mode(&self) -> GateMode {
        match self.noise {
            NoiseModel::Perfect => GateMode::Perfect,
            _ => GateMode::Imperfect,
        }
    }

    /// Per-bit trial count, rounded up to odd so the majority cannot tie.
    pub fn trials(&self) -> Result<u64> {
        match self.trials_override {
            Some(m) if m >= 1 => Ok(m),
            Some(m) => Err(Error::Contract(format!("trial override {m} must be >= 1"))),
            None => {
                let m = acpa_trials(self.n, self.k, self.gate_mode())?;
                Ok(m + (1 - m % 2))
            }
        }
    }
}

/// Per-bit trial count before integer rounding:
/// `2 ln(4n) / (1 - pi^2 / 2^(2k-1))^2`, with the exponent dropping to
/// `2k - 3` when the rotations themselves carry worst-case error.
pub fn acpa_trials_closed(n: u32, k: u32, mode: GateMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::Contract("precision n must be >= 1".into()));
    }
    if k < 3 {
        return Err(Error::Contract(format!("precision degree k = {k} must be >= 3")));
    }
    let exponent = match mode {
        GateMode::Perfect => 2 * k - 1,
        GateMode::Imperfect => 2 * k - 3,
    };
    // The factor is squared, so a negative inner term (k = 3 imperfect)
    // still yields a positive denominator; only an exact zero is out.
    let inner = 1.0 - PI * PI / (exponent as f64).exp2();
    if inner == 0.0 {
        return Err(Error::Domain(format!(
            "trial denominator vanishes at k = {k} ({mode:?})"
        )));
    }
    Ok(2.0 * (4.0 * n as f64).ln() / (inner * inner))
}

/// Ceiling of [`acpa_trials_closed`].
pub fn acpa_trials(n: u32, k: u32, mode: GateMode) -> Result<u64> {
    Ok(acpa_trials_closed(n, k, mode)?.ceil() as u64)
}

/// Number of feedback rotations applied when estimating bit `j`: the suffix
/// window truncates at the register edge.
pub fn rotations_for_bit(j: u32, n: u32, k: u32) -> u32 {
    (k - 1).min(n - j)
}

/// Majority-vote recovery of bit `x_j` given the previously estimated
/// suffix. Returns the bit and whether the vote tied (resolved to 0).
pub fn estimate_bit(
    j: u32,
    known_suffix: &BitString,
    phi: &PhaseFraction,
    cfg: &AcpaConfig,
    m: u64,
    source: &mut impl TrialSource,
) -> Result<(bool, bool)> {
    let mut ones = 0u64;
    match cfg.noise {
        NoiseModel::StochasticUniform { eta } => {
            let gates = rotations_for_bit(j, cfg.n, cfg.k);
            for _ in 0..m {
                let shift: f64 =
                    (0..gates).map(|_| eta * source.uniform_symmetric()).sum();
                let (_, p1) =
                    acpa_step_probability_with_shift(j, known_suffix, cfg.k, phi, shift)?;
                if source.sample(p1) {
                    ones += 1;
                }
            }
        }
        _ => {
            let (_, p1) = acpa_step_probability(j, known_suffix, cfg.k, phi, &cfg.noise)?;
            for _ in 0..m {
                if source.sample(p1) {
                    ones += 1;
                }
            }
        }
    }
    let tie = 2 * ones == m;
    Ok((2 * ones > m, tie))
}

/// Full pipeline: recover `x_n` down to `x_1`, tally resources.
pub fn run_acpa(
    phi: &PhaseFraction,
    cfg: &AcpaConfig,
    sources: &impl SourceFactory,
) -> Result<EstimateReport> {
    let n = cfg.n;
    if n == 0 {
        return Err(Error::Contract("precision n must be >= 1".into()));
    }
    if n > 100 {
        return Err(Error::Capacity(format!("n = {n} exceeds the 2^n tally capacity")));
    }
    let m = cfg.trials()?;
    let mut bits = vec![false; n as usize];
    let mut any_tie = false;
    for j in (1..=n).rev() {
        let window = rotations_for_bit(j, n, cfg.k) as usize;
        let suffix = BitString::new(bits[j as usize..j as usize + window].to_vec());
        let mut source = sources.source(j as u64);
        let (bit, tie) = estimate_bit(j, &suffix, phi, cfg, m, &mut source)?;
        bits[j as usize - 1] = bit;
        any_tie |= tie;
    }
    let bits = BitString::new(bits);
    let estimate = bits.to_fraction()?;

    let rotations: u128 =
        (1..=n).map(|j| m as u128 * rotations_for_bit(j, n, cfg.k) as u128).sum();
    let mut flags = Vec::new();
    if any_tie {
        flags.push(ReportFlag::MajorityTie);
    }
    Ok(EstimateReport {
        algorithm: Algorithm::Acpa,
        bits,
        phase: estimate,
        trials_per_unit: m,
        measurements: n as u64 * m,
        u_invocations: m as u128 * ((1u128 << n) - 1),
        u_invocations_model: None,
        rotation_invocations: rotations,
        flags,
    })
}
