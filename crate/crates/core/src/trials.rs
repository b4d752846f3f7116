//! Bernoulli trial sources.
//!
//! Estimators are written against [`TrialSource`] so the seeded sampler can
//! be swapped for [`ExactProbability`], which replaces empirical frequencies
//! by the exact outcome probabilities. The noise-free pipelines must then
//! recover every phase exactly; the tests lean on that heavily.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::rng::RngStream;

/// Source of Bernoulli outcomes at a caller-supplied success probability.
pub trait TrialSource {
    /// One draw; returns `true` with probability `p1`.
    fn sample(&mut self, p1: f64) -> bool;

    /// Observed fraction of 1-outcomes over `trials` draws.
    fn ones_fraction(&mut self, p1: f64, trials: u64) -> f64 {
        let ones = (0..trials).filter(|_| self.sample(p1)).count();
        ones as f64 / trials as f64
    }

    /// One draw uniform on [-1, 1]; deterministic sources return the mean 0.
    fn uniform_symmetric(&mut self) -> f64 {
        0.0
    }
}

/// Seeded Monte Carlo sampler backed by one [`RngStream`].
pub struct MonteCarlo {
    rng: ChaCha8Rng,
}

impl MonteCarlo {
    pub fn new(stream: RngStream) -> Self {
        Self { rng: stream.rng() }
    }
}

impl TrialSource for MonteCarlo {
    fn sample(&mut self, p1: f64) -> bool {
        debug_assert!((0.0..=1.0).contains(&p1));
        self.rng.random::<f64>() < p1
    }

    fn uniform_symmetric(&mut self) -> f64 {
        2.0 * self.rng.random::<f64>() - 1.0
    }
}

/// Replaces sampling by the exact probability: `ones_fraction` returns `p1`
/// itself and single draws report the majority outcome.
pub struct ExactProbability;

impl TrialSource for ExactProbability {
    fn sample(&mut self, p1: f64) -> bool {
        p1 > 0.5
    }

    fn ones_fraction(&mut self, p1: f64, _trials: u64) -> f64 {
        p1
    }
}

/// Per-task factory so each independent estimation step gets its own stream.
pub trait SourceFactory {
    type Source: TrialSource;

    fn source(&self, tag: u64) -> Self::Source;
}

/// Factory producing seeded [`MonteCarlo`] samplers from substreams.
#[derive(Clone, Copy)]
pub struct MonteCarloFactory {
    pub stream: RngStream,
}

impl MonteCarloFactory {
    pub fn new(stream: RngStream) -> Self {
        Self { stream }
    }
}

impl SourceFactory for MonteCarloFactory {
    type Source = MonteCarlo;

    fn source(&self, tag: u64) -> MonteCarlo {
        MonteCarlo::new(self.stream.substream(tag))
    }
}

/// Factory for the exact-probability oracle.
#[derive(Clone, Copy)]
pub struct ExactFactory;

impl SourceFactory for ExactFactory {
    type Source = ExactProbability;

    fn source(&self, _tag: u64) -> ExactProbability {
        ExactProbability
    }
}
