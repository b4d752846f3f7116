//! Seeded Monte Carlo campaigns.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cppe_core::trials::MonteCarloFactory;
use cppe_core::{
    run_acpa, run_fpe, run_kitaev, AcpaConfig, Algorithm, EstimateReport, FpeConfig,
    KitaevConfig, NoiseModel, PhaseFraction, RngStream,
};
use rand::Rng;

use crate::args::{Mode, SimulateArgs};
use crate::error::{CliError, Result};
use crate::record::{recompute_summary, RunRecord, Summary, SCHEMA_VERSION};

/// On-disk experiment description; any field a flag also provides is
/// overridden by the flag.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: Option<u32>,
    pub algorithm: Option<String>,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub mode: Option<String>,
    pub eta: Option<f64>,
    pub phase: Option<String>,
    pub reps: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhaseSource {
    Explicit(PhaseFraction),
    Random,
    Grid,
}

/// A fully resolved campaign: flags merged over config over defaults.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub algorithm: Algorithm,
    pub n: u32,
    pub k: u32,
    pub mode: Mode,
    pub eta: Option<f64>,
    pub phase: PhaseSource,
    pub reps: u64,
    pub seed: u64,
}

pub fn resolve(args: &SimulateArgs) -> Result<Campaign> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let cfg: ExperimentConfig = toml::from_str(&text)
                .map_err(|e| CliError::Config(e.to_string()))?;
            match cfg.schema_version {
                Some(SCHEMA_VERSION) => cfg,
                Some(v) => {
                    return Err(CliError::Config(format!(
                        "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
                    )))
                }
                None => {
                    return Err(CliError::Config("missing schema_version header".into()))
                }
            }
        }
        None => ExperimentConfig::default(),
    };

    let algorithm = match (args.algorithm, file.algorithm.as_deref()) {
        (Some(m), _) => Algorithm::from(m),
        (None, Some("kitaev")) => Algorithm::Kitaev,
        (None, Some("acpa")) => Algorithm::Acpa,
        (None, Some("fpe")) => Algorithm::Fpe,
        (None, Some(other)) => {
            return Err(CliError::Config(format!("unknown algorithm {other:?}")))
        }
        (None, None) => return Err(CliError::Usage("--algorithm is required".into())),
    };
    let mode = match (args.mode, file.mode.as_deref()) {
        (Some(m), _) => m,
        (None, Some("perfect") | None) => Mode::Perfect,
        (None, Some("imperfect")) => Mode::Imperfect,
        (None, Some(other)) => {
            return Err(CliError::Config(format!("unknown mode {other:?}")))
        }
    };
    if mode == Mode::Imperfect && algorithm != Algorithm::Acpa {
        return Err(CliError::Usage(
            "imperfect mode models rotation error and applies to acpa only".into(),
        ));
    }
    let n = args
        .n
        .or(file.n)
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let phase_text = args
        .phase
        .clone()
        .or(file.phase)
        .unwrap_or_else(|| "random".to_string());
    let phase = match phase_text.as_str() {
        "random" => PhaseSource::Random,
        "grid" => PhaseSource::Grid,
        explicit => PhaseSource::Explicit(
            explicit
                .parse()
                .map_err(|e| CliError::Usage(format!("bad phase {explicit:?}: {e}")))?,
        ),
    };
    if n == 0 || n > 24 {
        return Err(CliError::Usage(format!("n = {n} outside the simulable range 1..=24")));
    }
    Ok(Campaign {
        algorithm,
        n,
        k: args.k.or(file.k).unwrap_or(3),
        mode,
        eta: args.eta.or(file.eta),
        phase: phase.clone(),
        reps: args.reps.or(file.reps).unwrap_or(100),
        seed: args.seed.or(file.seed).unwrap_or(0),
    })
}

fn phase_for_rep(campaign: &Campaign, rep: u64, stream: &RngStream) -> PhaseFraction {
    let cells = 1u128 << campaign.n;
    match &campaign.phase {
        PhaseSource::Explicit(phi) => *phi,
        PhaseSource::Grid => PhaseFraction::new(rep as u128 % cells, campaign.n)
            .expect("n bounded by resolve"),
        PhaseSource::Random => {
            let mut rng = stream.substream(9).rng();
            PhaseFraction::new(rng.random_range(0..cells), campaign.n)
                .expect("n bounded by resolve")
        }
    }
}

fn run_one(campaign: &Campaign, rep: u64) -> Result<RunRecord> {
    let stream = RngStream::new(campaign.seed, rep);
    let phi = phase_for_rep(campaign, rep, &stream);
    let sources = MonteCarloFactory::new(stream.substream(1));
    let report: EstimateReport = match campaign.algorithm {
        Algorithm::Kitaev => run_kitaev(&phi, &KitaevConfig::new(campaign.n), &sources)?,
        Algorithm::Acpa => {
            let noise = match campaign.mode {
                Mode::Perfect => NoiseModel::Perfect,
                Mode::Imperfect => NoiseModel::WorstCaseAdditive {
                    eta: campaign
                        .eta
                        .unwrap_or_else(|| NoiseModel::default_eta(campaign.k)),
                },
            };
            let cfg = AcpaConfig {
                n: campaign.n,
                k: campaign.k,
                noise,
                trials_override: None,
            };
            run_acpa(&phi, &cfg, &sources)?
        }
        Algorithm::Fpe => {
            let cfg = FpeConfig::defaults(campaign.n)?;
            run_fpe(&phi, &cfg, stream.substream(2), &sources)?
        }
    };
    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        rep,
        seed: campaign.seed,
        algorithm: campaign.algorithm,
        n: campaign.n,
        k: (campaign.algorithm == Algorithm::Acpa).then_some(campaign.k),
        mode: campaign.mode.to_string(),
        phase_true: phi,
        success: report.succeeds(&phi, campaign.n),
        estimate: report.phase,
        trials_per_unit: report.trials_per_unit,
        measurements: report.measurements,
        u_invocations: report.u_invocations,
        u_invocations_model: report.u_invocations_model,
        rotation_invocations: report.rotation_invocations,
        flags: report.flags,
    })
}

/// Runs the campaign, repetitions in parallel, output in repetition order.
pub fn run_campaign(campaign: &Campaign) -> Result<(Vec<RunRecord>, Summary)> {
    let records: Vec<RunRecord> = (0..campaign.reps)
        .into_par_iter()
        .map(|rep| run_one(campaign, rep))
        .collect::<Result<_>>()?;
    let summary = recompute_summary(&records);
    Ok((records, summary))
}
