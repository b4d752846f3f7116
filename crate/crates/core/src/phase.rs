//! Exact dyadic phase fractions and binary bitstrings.
//!
//! Every eigenphase, multiple-of-a-phase and rotation residual in the three
//! estimators is a dyadic rational in `[0, 1)`. Keeping them as
//! `numerator / 2^log2_den` pairs makes doubling, multiplying and mod-1
//! subtraction exact; conversion to floating point happens only at the last
//! moment, when a trigonometric probability is evaluated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::{mod1_distance, Real};

/// Largest supported denominator exponent. Values stay well inside `u128`
/// even after aligning two fractions to a common denominator.
pub const MAX_LOG2_DEN: u32 = 120;

/// An exact value in `[0, 1)` of the form `num / 2^log2_den`.
#[derive(Clone, Copy, Debug)]
pub struct PhaseFraction {
    num: u128,
    log2_den: u32,
}

impl PhaseFraction {
    /// Builds `num / 2^log2_den`, requiring the value to lie in `[0, 1)`.
    pub fn new(num: u128, log2_den: u32) -> Result<Self> {
        if log2_den > MAX_LOG2_DEN {
            return Err(Error::Capacity(format!(
                "denominator exponent {log2_den} exceeds {MAX_LOG2_DEN}"
            )));
        }
        if log2_den < 128 && num >> log2_den != 0 {
            return Err(Error::Contract(format!(
                "{num}/2^{log2_den} is not in [0, 1)"
            )));
        }
        Ok(Self { num, log2_den })
    }

    pub fn zero() -> Self {
        Self { num: 0, log2_den: 0 }
    }

    /// The eighth `e/8` for `e` in `0..8`.
    pub fn eighth(e: u8) -> Self {
        debug_assert!(e < 8);
        Self { num: (e % 8) as u128, log2_den: 3 }
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn log2_den(&self) -> u32 {
        self.log2_den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Floating-point view used for trigonometric evaluation.
    pub fn value<F: Real>(&self) -> F {
        F::from_f64_lossy(self.num as f64 / (self.log2_den as f64).exp2())
    }

    /// Drops trailing zero bits so equal values share one representation.
    pub fn normalized(mut self) -> Self {
        while self.log2_den > 0 && self.num % 2 == 0 {
            self.num >>= 1;
            self.log2_den -= 1;
        }
        self
    }

    fn aligned(&self, log2_den: u32) -> u128 {
        debug_assert!(log2_den >= self.log2_den);
        self.num << (log2_den - self.log2_den)
    }

    /// Fractional part of `m * self`, computed exactly.
    ///
    /// Only the low `log2_den` bits of the product matter mod 1, so the
    /// wrapping product is exact for any `m`; no capacity can be exceeded
    /// once the fraction itself was constructed.
    pub fn multiply(&self, m: u128) -> Self {
        let mask = if self.log2_den == 128 {
            u128::MAX
        } else {
            (1u128 << self.log2_den).wrapping_sub(1)
        };
        Self { num: self.num.wrapping_mul(m) & mask, log2_den: self.log2_den }
    }

    /// `frac(2^k * self)`: the phase with its top `k` bits dropped.
    pub fn shifted(&self, k: u32) -> Self {
        if k >= self.log2_den {
            return Self::zero();
        }
        self.multiply(1u128 << k)
    }

    pub fn double(&self) -> Self {
        self.shifted(1)
    }

    /// Exact `(self - other) mod 1`.
    pub fn sub_mod1(&self, other: &Self) -> Result<Self> {
        let den = self.log2_den.max(other.log2_den);
        if den > MAX_LOG2_DEN {
            return Err(Error::Capacity("denominator alignment overflow".into()));
        }
        let a = self.aligned(den);
        let b = other.aligned(den);
        let modulus = 1u128 << den;
        let num = if a >= b { a - b } else { modulus - (b - a) } % modulus;
        Ok(Self { num, log2_den: den })
    }

    pub fn add_mod1(&self, other: &Self) -> Result<Self> {
        let den = self.log2_den.max(other.log2_den);
        if den > MAX_LOG2_DEN {
            return Err(Error::Capacity("denominator alignment overflow".into()));
        }
        let modulus = 1u128 << den;
        let num = (self.aligned(den) + other.aligned(den)) % modulus;
        Ok(Self { num, log2_den: den })
    }

    /// Exact mod-1 distance `min(|a-b|, 1-|a-b|)` as a dyadic fraction.
    pub fn distance(&self, other: &Self) -> Self {
        let d = self.sub_mod1(other).expect("aligned inputs");
        let modulus = 1u128 << d.log2_den;
        let num = d.num.min(modulus - d.num) % modulus;
        Self { num, log2_den: d.log2_den }
    }

    /// True when the exact distance to `other` is strictly below `1/2^bits`.
    pub fn within(&self, other: &Self, bits: u32) -> bool {
        let d = self.distance(other);
        if bits >= d.log2_den {
            d.num == 0
        } else {
            d.num < 1u128 << (d.log2_den - bits)
        }
    }

    /// Leading `len` bits of the binary expansion, most significant first.
    pub fn leading_bits(&self, len: u32) -> BitString {
        let bits = (0..len)
            .map(|i| {
                if i < self.log2_den {
                    (self.num >> (self.log2_den - 1 - i)) & 1 == 1
                } else {
                    false
                }
            })
            .collect();
        BitString { bits }
    }
}

impl PartialEq for PhaseFraction {
    fn eq(&self, other: &Self) -> bool {
        let den = self.log2_den.max(other.log2_den);
        self.aligned(den) == other.aligned(den)
    }
}

impl Eq for PhaseFraction {}

impl PartialOrd for PhaseFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PhaseFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let den = self.log2_den.max(other.log2_den);
        self.aligned(den).cmp(&other.aligned(den))
    }
}

impl fmt::Display for PhaseFraction {
    /// Binary-fraction text form `0.b1b2...bm` (always at least one digit).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        if self.log2_den == 0 {
            return write!(f, "0");
        }
        for i in (0..self.log2_den).rev() {
            write!(f, "{}", (self.num >> i) & 1)?;
        }
        Ok(())
    }
}

impl FromStr for PhaseFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix("0.")
            .ok_or_else(|| Error::Parse(format!("phase `{s}` must start with `0.`")))?;
        if digits.is_empty() {
            return Err(Error::Parse("phase has no binary digits".into()));
        }
        let mut num: u128 = 0;
        let mut len: u32 = 0;
        for ch in digits.chars() {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Parse(format!("invalid binary digit `{ch}`"))),
            };
            len += 1;
            if len > MAX_LOG2_DEN {
                return Err(Error::Capacity(format!(
                    "more than {MAX_LOG2_DEN} binary digits"
                )));
            }
            num = (num << 1) | bit;
        }
        PhaseFraction::new(num, len)
    }
}

impl Serialize for PhaseFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhaseFraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered list of bits, most significant first; converts to a
/// [`PhaseFraction`] as `0.x1 x2 ... xm` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn to_fraction(&self) -> Result<PhaseFraction> {
        let len = self.bits.len() as u32;
        if len > MAX_LOG2_DEN {
            return Err(Error::Capacity(format!("{len} bits exceed capacity")));
        }
        let mut num: u128 = 0;
        for &b in &self.bits {
            num = (num << 1) | b as u128;
        }
        PhaseFraction::new(num, len)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("invalid binary digit `{ch}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nearest member of `{0/8, ..., 7/8}` under mod-1 distance.
///
/// The result always satisfies `mod1_distance(x, beta) <= 1/16`; exact ties
/// break toward the smaller phase value.
pub fn nearest_eighth(x: f64) -> PhaseFraction {
    let x = x.rem_euclid(1.0);
    let scaled = x * 8.0;
    let lo = (scaled.floor() as i64).rem_euclid(8) as u8;
    let hi = (lo + 1) % 8;
    let (cl, ch) = (PhaseFraction::eighth(lo), PhaseFraction::eighth(hi));
    let dl = mod1_distance(x, cl.value::<f64>());
    let dh = mod1_distance(x, ch.value::<f64>());
    match dl.partial_cmp(&dh).expect("finite distances") {
        Ordering::Less => cl,
        Ordering::Greater => ch,
        Ordering::Equal => cl.min(ch),
    }
}
