//! Exact outcome distributions of the single-control-qubit circuits.
//!
//! All circuits here are one control qubit against a diagonal target, so the
//! simulation reduces to exact dyadic phase arithmetic followed by a closed
//! trigonometric form; no statevector is ever materialized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{BitString, PhaseFraction};
use crate::real::Real;

/// Extra phase gate applied before measurement in a Hadamard test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KGate {
    /// Plain test: outcome statistics encode `cos(2 pi phi_k)`.
    Identity,
    /// Square root of Pauli-Z: statistics encode `sin(2 pi phi_k)`.
    SqrtZ,
}

/// One Hadamard test: controlled `U^M` with an optional extra phase gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardTestSpec {
    /// Power of `U` applied (`M >= 1`).
    pub multiplier: u128,
    pub k_gate: KGate,
}

impl HadamardTestSpec {
    pub fn new(multiplier: u128, k_gate: KGate) -> Result<Self> {
        if multiplier == 0 {
            return Err(Error::Contract("multiplier must be >= 1".into()));
        }
        Ok(Self { multiplier, k_gate })
    }
}

/// Rotation-gate imperfection model, in revolutions per gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NoiseModel {
    Perfect,
    /// Deterministic worst case: the residual phase gains `(k-1) * eta`.
    WorstCaseAdditive { eta: f64 },
    /// Each applied rotation draws an independent offset in `[-eta, eta]`.
    /// Off by default; the published analysis is worst-case.
    StochasticUniform { eta: f64 },
}

impl NoiseModel {
    /// Default worst-case offset for degree-`k` rotations: `1/((k-1) 2^k)`.
    pub fn default_eta(k: u32) -> f64 {
        1.0 / ((k as f64 - 1.0) * (k as f64).exp2())
    }

    pub fn worst_case(k: u32) -> Self {
        NoiseModel::WorstCaseAdditive { eta: Self::default_eta(k) }
    }
}

/// Exact `(p0, p1)` of the Hadamard test on eigenphase `phi`.
pub fn hadamard_probabilities<F: Real>(
    spec: &HadamardTestSpec,
    phi: &PhaseFraction,
) -> (F, F) {
    let phi_k: F = spec.multiplier_phase(phi).value();
    let two_pi = F::TAU();
    let half = F::from_f64_lossy(0.5);
    match spec.k_gate {
        KGate::Identity => {
            let c = (two_pi * phi_k).cos();
            (half * (F::one() + c), half * (F::one() - c))
        }
        KGate::SqrtZ => {
            let s = (two_pi * phi_k).sin();
            (half * (F::one() - s), half * (F::one() + s))
        }
    }
}

impl HadamardTestSpec {
    /// The phase the control qubit actually accumulates: `frac(M * phi)`.
    pub fn multiplier_phase(&self, phi: &PhaseFraction) -> PhaseFraction {
        phi.multiply(self.multiplier)
    }
}

/// Controlled-`U^M` costs `M` plain controlled-`U` applications.
pub fn u_invocations_per_test(spec: &HadamardTestSpec) -> u128 {
    spec.multiplier
}

/// Exact residual phase after the inverse-rotation feedback of one
/// constant-precision step: `frac(2^(j-1) phi) - 0.0 x_{j+1} ... x_{j+k-1}`
/// mod 1, with the suffix truncated at the register edge.
pub fn acpa_residual(
    j: u32,
    known_suffix: &BitString,
    k: u32,
    phi: &PhaseFraction,
) -> Result<PhaseFraction> {
    if j == 0 {
        return Err(Error::Contract("bit index j starts at 1".into()));
    }
    if k < 2 {
        return Err(Error::Contract("precision degree k must be >= 2".into()));
    }
    if known_suffix.len() as u32 > k - 1 {
        return Err(Error::Contract(format!(
            "suffix of {} bits exceeds the k-1 = {} feedback rotations",
            known_suffix.len(),
            k - 1
        )));
    }
    let shifted = phi.shifted(j - 1);
    // Suffix bit x_{j+i} sits at binary position i+1 of the subtrahend.
    let mut feedback = PhaseFraction::zero();
    for (i, &bit) in known_suffix.bits().iter().enumerate() {
        if bit {
            let term = PhaseFraction::new(1, i as u32 + 2)?;
            feedback = feedback.add_mod1(&term)?;
        }
    }
    shifted.sub_mod1(&feedback)
}

/// Outcome distribution `(p0, p1)` of the constant-precision step for bit
/// `j`, after feeding back the previously estimated suffix bits.
///
/// Under [`NoiseModel::WorstCaseAdditive`] the residual gains the full
/// `(k-1) * eta` offset. The stochastic mode needs per-gate draws and is
/// handled by the caller via `acpa_step_probability_with_shift`.
pub fn acpa_step_probability(
    j: u32,
    known_suffix: &BitString,
    k: u32,
    phi: &PhaseFraction,
    noise: &NoiseModel,
) -> Result<(f64, f64)> {
    let shift = match noise {
        NoiseModel::Perfect => 0.0,
        NoiseModel::WorstCaseAdditive { eta } => (k as f64 - 1.0) * eta,
        NoiseModel::StochasticUniform { .. } => {
            return Err(Error::Contract(
                "stochastic noise needs per-gate draws; use the shift variant".into(),
            ))
        }
    };
    acpa_step_probability_with_shift(j, known_suffix, k, phi, shift)
}

/// Same as [`acpa_step_probability`] with an explicit additive angle offset
/// (in revolutions) already accumulated over the applied rotations.
pub fn acpa_step_probability_with_shift(
    j: u32,
    known_suffix: &BitString,
    k: u32,
    phi: &PhaseFraction,
    shift: f64,
) -> Result<(f64, f64)> {
    let residual = acpa_residual(j, known_suffix, k, phi)?;
    let noisy: f64 = residual.value::<f64>() + shift;
    let p0 = (std::f64::consts::PI * noisy).cos().powi(2);
    Ok((p0, 1.0 - p0))
}
