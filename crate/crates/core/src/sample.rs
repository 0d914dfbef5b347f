//! Deterministic random sampling of exact rationals for polynomial identity
//! testing.
//!
//! Numerators and denominators are drawn uniformly from `[-50, 50] \ {0}`;
//! small magnitudes keep big-integer growth bounded across compositions.
//! Values that would annihilate a declared denominator are rejected and the
//! rejection is counted, never silently absorbed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

const RANGE: i64 = 50;

pub struct Sampler {
    rng: ChaCha8Rng,
    pub rejections: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rejections: 0,
        }
    }

    /// Sub-seed derived by counter, so parallel fans stay schedule
    /// independent.
    pub fn for_trial(seed: u64, counter: u64) -> Self {
        Sampler::new(seed ^ counter.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn nonzero_component(&mut self) -> i64 {
        loop {
            let v = self.rng.gen_range(-RANGE..=RANGE);
            if v != 0 {
                return v;
            }
        }
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rat(&mut self) -> Scalar {
        Scalar::ratio(self.nonzero_component(), self.nonzero_component())
    }

    /// A rational, zero allowed.
    pub fn rat_or_zero(&mut self) -> Scalar {
        Scalar::ratio(
            self.rng.gen_range(-RANGE..=RANGE),
            self.nonzero_component(),
        )
    }

    /// A rational accepted by `ok`; rejections are counted.
    pub fn rat_where(&mut self, mut ok: impl FnMut(&Scalar) -> bool) -> Scalar {
        loop {
            let v = self.rat();
            if ok(&v) {
                return v;
            }
            self.rejections += 1;
        }
    }

    /// Base for the q-linear grid: nonzero and not ±1. The only rational
    /// roots of unity are ±1, so this is the full root-of-unity exclusion.
    pub fn q_base(&mut self) -> Scalar {
        self.rat_where(|v| *v != Scalar::int(1) && *v != Scalar::int(-1))
    }

    /// A small positive rational, e.g. for lattice shifts.
    pub fn positive_rat(&mut self) -> Scalar {
        let n = self.rng.gen_range(1..=RANGE);
        let d = self.rng.gen_range(1..=RANGE);
        Scalar::ratio(n, d)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..10 {
            assert_eq!(a.rat(), b.rat());
        }
    }

    #[test]
    fn q_base_avoids_unit_values() {
        let mut s = Sampler::new(1);
        for _ in 0..100 {
            let q = s.q_base();
            assert!(!q.is_zero());
            assert_ne!(q, Scalar::int(1));
            assert_ne!(q, Scalar::int(-1));
        }
    }
}
