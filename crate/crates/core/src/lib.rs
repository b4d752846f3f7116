//! Classical simulation and resource accounting for three phase-estimation
//! strategies: Kitaev's Hadamard-test iteration, the arbitrary
//! constant-precision approach, and two-round faster phase estimation.
//!
//! Phases are exact dyadic fractions ([`PhaseFraction`]); measurement
//! statistics are exact outcome distributions sampled through a swappable
//! [`trials::TrialSource`], so every pipeline can be driven either by seeded
//! Monte Carlo or by a noise-free probability oracle. Numeric kernels are
//! generic over the scalar type through [`real::Real`]; the pipelines and
//! the cost model use the default scalar.

pub mod acpa;
pub mod calibrate;
pub mod cost;
pub mod error;
pub mod fpe;
pub mod kitaev;
pub mod measurement;
pub mod phase;
pub mod real;
pub mod report;
pub mod rng;
pub mod trials;

pub use acpa::{run_acpa, AcpaConfig, GateMode};
pub use calibrate::CalibrationReport;
pub use error::{Error, Result};
pub use fpe::{run_fpe, FpeConfig};
pub use kitaev::{run_kitaev, KitaevConfig};
pub use measurement::NoiseModel;
pub use phase::{BitString, PhaseFraction};
pub use report::{Algorithm, EstimateReport, ReportFlag};
pub use rng::RngStream;

/// Concrete scalar used by the estimation pipelines.
pub type DefaultScalar = f64;
