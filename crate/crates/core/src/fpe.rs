//! Two-round faster phase estimation: a coarse per-bit round, a round of
//! random multi-power multipliers each repeated `C` times, and an exhaustive
//! dyadic grid inference combining both.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::calibrate::constants;
use crate::error::{Error, Result};
use crate::kitaev::recover_from_tests;
use crate::phase::PhaseFraction;
use crate::real::mod1_distance;
use crate::report::{Algorithm, EstimateReport, ReportFlag};
use crate::rng::RngStream;
use crate::trials::SourceFactory;

/// Per-function Hadamard-test count for sigma precision 1/32 at failure
/// 1/16: `ceil(ln 32 / (2 (delta/2)^2))` with the derived amplitude budget.
pub fn fpe_per_function_trials() -> u64 {
    let dp = constants().fpe_delta / 2.0;
    (32f64.ln() / (2.0 * dp * dp)).ceil() as u64
}

/// Total repetitions per multiplier: sine and cosine batches combined.
pub fn repetition_constant() -> u64 {
    2 * fpe_per_function_trials()
}

/// Configuration of one two-round estimation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FpeConfig {
    /// Target bit precision (>= 2).
    pub n: u32,
    /// Powers of two per multiplier.
    pub s: u32,
    /// Measurements-per-bit factor; the record count is `ceil(s2 * n)`.
    pub s2: f64,
    /// Repetitions per multiplier (even).
    pub c: u64,
    /// Round-1 repetitions per bit and per test function.
    pub round1_reps: u64,
}

impl FpeConfig {
    /// Paper defaults: `S = round(ln n)`, `s2 = ln(4n)/ln(n)`,
    /// `C` from [`repetition_constant`], round-1 repetitions
    /// `max(3, ceil(log2 log2 4n))`.
    pub fn defaults(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(
                "two-round estimation needs n >= 2 (s2 is singular at n = 1)".into(),
            ));
        }
        let nf = n as f64;
        let s = (nf.ln().round() as u32).max(1);
        Ok(Self {
            n,
            s,
            s2: (4.0 * nf).ln() / nf.ln(),
            c: repetition_constant(),
            round1_reps: round1_reps(n),
        })
    }

    /// Number of round-2 multiplier records.
    pub fn records(&self) -> u64 {
        (self.s2 * self.n as f64).ceil() as u64
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain("n must be >= 2".into()));
        }
        if self.s == 0 || self.s > self.n {
            return Err(Error::Domain(format!(
                "density S = {} outside 1..={}",
                self.s, self.n
            )));
        }
        if self.c < 2 || self.c % 2 != 0 {
            return Err(Error::Contract(format!("C = {} must be even and >= 2", self.c)));
        }
        if self.records() == 0 || self.round1_reps == 0 {
            return Err(Error::Contract("record and repetition counts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Round-1 repetitions per bit: `ceil(log2 log2 4n)`, at least 3.
pub fn round1_reps(n: u32) -> u64 {
    let x = (4.0 * n as f64).log2().log2().ceil() as u64;
    x.max(3)
}

/// One round-2 constraint: multiplier and estimated `frac(M phi)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SigmaRecord {
    pub m_i: u128,
    pub sigma: f64,
}

/// Draws `records` multipliers, each a uniformly random `S`-subset of the
/// exponents `1..=n` (exponent `j` contributes `2^(j-1)`).
pub fn generate_multipliers(cfg: &FpeConfig, stream: RngStream) -> Result<Vec<u128>> {
    cfg.validate()?;
    let mut rng = stream.rng();
    let mut out = Vec::with_capacity(cfg.records() as usize);
    for _ in 0..cfg.records() {
        let picks = sample(&mut rng, cfg.n as usize, cfg.s as usize);
        let m_i = picks.iter().fold(0u128, |acc, idx| acc | (1u128 << idx));
        out.push(m_i);
    }
    Ok(out)
}

/// Estimates `frac(M_i phi)` from `c` Hadamard tests.
pub fn estimate_sigma(
    m_i: u128,
    phi: &PhaseFraction,
    c: u64,
    source: &mut impl crate::trials::TrialSource,
) -> Result<SigmaRecord> {
    let (_, _, sigma) = recover_from_tests(m_i, phi, c, source)?;
    Ok(SigmaRecord { m_i, sigma })
}

/// Grid inference over the `2^(n+3)` dyadic candidates.
///
/// Feasible candidates sit within 1/16 (inclusive) of every round-1 per-bit
/// estimate; among those, the squared mod-1 loss against the sigma records
/// decides, ties resolving to the lowest candidate. An empty feasible set
/// falls back to the unfiltered minimizer and reports it.
pub fn infer_phase(
    round1: &[f64],
    records: &[SigmaRecord],
    n: u32,
) -> Result<(PhaseFraction, Vec<PhaseFraction>, bool)> {
    if records.is_empty() {
        return Err(Error::Contract("need at least one sigma record".into()));
    }
    if round1.len() != n as usize {
        return Err(Error::Contract(format!(
            "need n = {n} round-1 estimates, got {}",
            round1.len()
        )));
    }
    if n > 24 {
        return Err(Error::Capacity(format!("grid 2^{} is beyond desk scale", n + 3)));
    }
    // Inclusive threshold: an estimate landing exactly 1/16 away (an exact
    // eighth boundary) must not exclude the candidate.
    let tol = 1.0 / 16.0 + 1e-12;

    let mut best: Option<(f64, u128)> = None;
    let mut best_feasible: Option<(f64, u128)> = None;
    for num in 0..(1u128 << (n + 3)) {
        let cand = PhaseFraction::new(num, n + 3)?;
        let loss: f64 = records
            .iter()
            .map(|r| {
                let d = mod1_distance(cand.multiply(r.m_i).value::<f64>(), r.sigma);
                d * d
            })
            .sum();
        if best.map_or(true, |(l, _)| loss < l) {
            best = Some((loss, num));
        }
        let feasible = round1.iter().enumerate().all(|(i, &est)| {
            mod1_distance(cand.shifted(i as u32).value::<f64>(), est) <= tol
        });
        if feasible && best_feasible.map_or(true, |(l, _)| loss < l) {
            best_feasible = Some((loss, num));
        }
    }
    let (fallback, num) = match best_feasible {
        Some((_, num)) => (false, num),
        None => (true, best.expect("grid non-empty").1),
    };
    let phi_hat = PhaseFraction::new(num, n + 3)?;
    let betas = (1..=n).map(|j| phi_hat.shifted(j - 1)).collect();
    Ok((phi_hat, betas, fallback))
}

/// Full pipeline: round-1 coarse estimates, round-2 sigma records, grid
/// inference. The report carries both the exact U tally and the closed-form
/// model value.
pub fn run_fpe(
    phi: &PhaseFraction,
    cfg: &FpeConfig,
    stream: RngStream,
    sources: &impl SourceFactory,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let n = cfg.n;

    let mut round1 = Vec::with_capacity(n as usize);
    for j in 1..=n {
        let mut source = sources.source(j as u64);
        let (_, _, est) = recover_from_tests(1u128 << (j - 1), phi, 2 * cfg.round1_reps, &mut source)?;
        round1.push(est);
    }

    let multipliers = generate_multipliers(cfg, stream.substream(0))?;
    let mut records = Vec::with_capacity(multipliers.len());
    for (i, &m_i) in multipliers.iter().enumerate() {
        let mut source = sources.source(1000 + i as u64);
        records.push(estimate_sigma(m_i, phi, cfg.c, &mut source)?);
    }

    let (phi_hat, _betas, fallback) = infer_phase(&round1, &records, n)?;
    let bits = phi_hat.leading_bits(n + 3);

    let exact_stage2: u128 = records.iter().map(|r| cfg.c as u128 * r.m_i).sum();
    let exact_stage1: u128 = 2 * cfg.round1_reps as u128 * ((1u128 << n) - 1);
    let model = cfg.s2 * cfg.s as f64 * cfg.c as f64 * ((1u128 << n) - 1) as f64;

    let mut flags = Vec::new();
    if fallback {
        flags.push(ReportFlag::Round1Fallback);
    }
    Ok(EstimateReport {
        algorithm: Algorithm::Fpe,
        bits,
        phase: phi_hat,
        trials_per_unit: cfg.c,
        measurements: n as u64 * 2 * cfg.round1_reps + cfg.records() * cfg.c,
        u_invocations: exact_stage1 + exact_stage2,
        u_invocations_model: Some(model),
        rotation_invocations: 0,
        flags,
    })
}
