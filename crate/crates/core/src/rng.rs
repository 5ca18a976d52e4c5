//! Deterministic randomness with splittable sub-streams.
//!
//! Every randomized procedure in this crate draws from a [`SplitMix64`]
//! generator (Sebastiano Vigna's SplitMix64: a 64-bit counter stepped by the
//! golden-ratio increment, hashed through a fixed avalanching finalizer).
//! The algorithm is frozen: identical `(master_seed, stream_id)` pairs
//! reproduce identical streams on every platform, which is what makes the
//! golden fixtures in the test suite portable.
//!
//! Sub-streams for repetition `r` are produced by [`derive_stream`], a pure
//! hash of `(master_seed, stream_id, r)`. Results therefore do not depend on
//! the order in which rounds are evaluated.

use serde::{Deserialize, Serialize};

/// Golden-ratio increment used by SplitMix64.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. Bijective on `u64`.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identity of one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id,
        }
    }

    /// Generator for this stream.
    pub fn rng(&self) -> SplitMix64 {
        SplitMix64::new(mix64(self.master_seed ^ GOLDEN_GAMMA) ^ mix64(self.stream_id))
    }
}

/// Child seed for repetition `round_index`, independent of evaluation order.
///
/// The inputs are absorbed through a chain of SplitMix64 finalizer steps;
/// each step is a bijection of the state.
pub fn derive_stream(seed: SeedSpec, round_index: u64) -> SeedSpec {
    let s0 = mix64(seed.master_seed ^ GOLDEN_GAMMA);
    let s1 = mix64(s0 ^ mix64(seed.stream_id ^ 0xA076_1D64_78BD_642F));
    let s2 = mix64(s1 ^ mix64(round_index ^ 0xE703_7ED1_A0B4_28DB));
    SeedSpec {
        master_seed: s2,
        stream_id: mix64(s2 ^ GOLDEN_GAMMA),
    }
}

/// SplitMix64 generator (non-cryptographic).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        SplitMix64 { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / DEN
    }

    /// Uniform integer in `[0, bound)` without modulo bias
    /// (Lemire's multiply-and-reject method).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }

    /// Standard normal draw via the Box-Muller transform.
    pub fn next_normal(&mut self) -> f64 {
        // 1 - u keeps the argument of ln strictly positive.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
