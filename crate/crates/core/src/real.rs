//! Generic scalar abstraction for the trigonometric and closed-form layers.
//!
//! Exact phase arithmetic lives in [`crate::phase`] and is integer-backed;
//! everything that evaluates probabilities, Chernoff counts or cost formulas
//! is written against [`Real`] so it works for `f32` and `f64` alike.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable in probability and cost computations.
pub trait Real: Float + FloatConst + FromPrimitive + Debug {
    /// Lossless-enough conversion from `f64` for constants and dyadic values.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert")
    }

    /// Convenience for integer-valued constants in formulas.
    fn from_u64_lossy(x: u64) -> Self {
        Self::from_u64(x).expect("u64 constant must convert")
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug {}

/// Distance on the unit circle of phases: `min(|a-b|, 1-|a-b|)`, in `[0, 1/2]`.
///
/// Inputs are taken mod 1, so callers may pass any real phase value.
pub fn mod1_distance<F: Real>(a: F, b: F) -> F {
    let d = (a - b).fract();
    let d = if d < F::zero() { d + F::one() } else { d };
    d.min(F::one() - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraparound_case() {
        assert!((mod1_distance(0.9_f64, 0.05) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn identity_and_max() {
        assert_eq!(mod1_distance(0.37_f64, 0.37), 0.0);
        assert_eq!(mod1_distance(0.0_f64, 0.5), 0.5);
    }

    #[test]
    fn works_for_f32() {
        assert!((mod1_distance(0.9_f32, 0.05) - 0.15).abs() < 1e-6);
    }

    #[test]
    fn out_of_range_inputs_are_reduced() {
        assert!((mod1_distance(1.9_f64, -0.95) - 0.15).abs() < 1e-12);
    }
}
