//! Counter-based pseudo-random numbers for reproducible Monte Carlo runs.
//!
//! `CounterRng` is a stateless SplitMix64 variant: draw `i` of a stream keyed
//! by `seed` is `mix64(key + (i+1)·GOLDEN)`, where `mix64` is the SplitMix64
//! finalizer. Because each draw is a pure function of `(seed, index)`, any
//! partition of the index range across workers reproduces the single-worker
//! sequence exactly, which is what makes sampled results independent of the
//! worker count.

/// 2⁶⁴/φ, the Weyl increment of SplitMix64.
const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
/// SplitMix64 finalizer multipliers.
const MIX_A: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_B: u64 = 0x94D0_49BB_1331_11EB;

/// SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_A);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_B);
    z ^ (z >> 31)
}

/// A keyed counter generator: `value(i)` is independent of any other index.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { key: mix64(seed) }
    }

    /// Derives an independent stream, e.g. one per estimation round.
    pub fn derive(&self, stream: u64) -> Self {
        CounterRng {
            key: mix64(self.key ^ mix64(stream.wrapping_add(GOLDEN))),
        }
    }

    /// The `index`-th 64-bit word of the stream.
    #[inline]
    pub fn value(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)),
        )
    }

    /// The `index`-th uniform double in [0, 1), using the top 53 bits.
    #[inline]
    pub fn uniform(&self, index: u64) -> f64 {
        (self.value(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
