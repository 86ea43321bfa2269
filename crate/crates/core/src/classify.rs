//! Weight-type classification for the bounded-weight matchers.
//!
//! Weights lie in `[1, U]`. With `k = ceil(sqrt(log2 U))` and `r = U^(1/k)`,
//! the type thresholds are `a_i = r^i` for `i = 0..=k`, so `a_0 = 1` and
//! `a_k = U`. A weight's type is the largest `i` with `a_i <= w`.
//!
//! `r` is irrational for most `U`, so thresholds are never materialized:
//! `a_i <= w` is decided by the equivalent integer-power comparison
//! `U^i <= w^k`, which is exact on rationals.

use num::One;

use crate::error::Error;
use crate::rational::{pow, pow2, Rational};
use crate::Result;

#[derive(Clone, Debug)]
pub struct ClassificationParams {
    u: Rational,
    k: u32,
}

impl ClassificationParams {
    pub fn new(u: Rational) -> Result<Self> {
        if u < Rational::one() {
            return Err(Error::Config(format!("U must be >= 1, got {u}")));
        }
        // k is the smallest integer with k^2 >= log2(U), i.e. 2^(k^2) >= U.
        let mut k = 0u32;
        while pow2((k * k) as i64) < u {
            k += 1;
        }
        Ok(ClassificationParams { u, k })
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Does `a_i <= w` hold? Decided as `U^i <= w^k`.
    fn threshold_le(&self, i: u32, w: &Rational) -> bool {
        if self.k == 0 {
            return i == 0;
        }
        pow(&self.u, i) <= pow(w, self.k)
    }

    /// The type of weight `w`: the largest `i` with `a_i <= w`.
    pub fn classify(&self, w: &Rational) -> Result<u32> {
        if *w < Rational::one() || *w > self.u {
            return Err(Error::WeightOutOfRange(format!(
                "weight {w} outside [1, {}]",
                self.u
            )));
        }
        let mut ty = 0;
        for i in 1..=self.k {
            if self.threshold_le(i, w) {
                ty = i;
            } else {
                break;
            }
        }
        Ok(ty)
    }

    /// `a_i` as an exact rational, when `U` happens to be a perfect k-th power
    /// of a rational (e.g. U = 65536, k = 4, r = 16). Otherwise `None`.
    pub fn exact_threshold(&self, i: u32) -> Option<Rational> {
        Some(pow(&self.exact_ratio()?, i))
    }

    /// `r = U^(1/k)` as an exact rational, when one exists.
    pub fn exact_ratio(&self) -> Option<Rational> {
        if self.k == 0 {
            return Some(Rational::one());
        }
        let rn = self.u.numer().nth_root(self.k);
        let rd = self.u.denom().nth_root(self.k);
        let r = Rational::new(rn, rd);
        if pow(&r, self.k) == self.u {
            Some(r)
        } else {
            None
        }
    }

    /// How many unmatched points each side of a candidate segment of type `i`
    /// must have before the wait-and-match rule accepts it: `2^(k-i) - 1`.
    pub fn side_threshold(&self, i: u32) -> usize {
        (1usize << (self.k - i) as usize) - 1
    }
}

/// The type of a segment between matched points: the type of the heavier end.
pub fn segment_type(i: u32, j: u32) -> u32 {
    i.max(j)
}
