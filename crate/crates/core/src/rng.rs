//! Small deterministic PRNG (SplitMix64) so that sampling oracles are
//! reproducible bit-for-bit across platforms for a fixed seed.

/// SplitMix64 generator. Not cryptographic; used only for sampling oracles
/// and property suites where replayability matters more than quality.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit_f64()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Random sign, +1.0 or -1.0.
    pub fn sign_f64(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Dyadic rational k / 2^26 with |k| <= 2^28 (values in [-4, 4]).
    ///
    /// Sums, differences and halving of a handful of such values are exact in
    /// f64, which lets identity suites assert zero-tolerance equalities.
    pub fn dyadic_f64(&mut self) -> f64 {
        let k = (self.next_u64() % ((1u64 << 29) + 1)) as i64 - (1i64 << 28);
        k as f64 / (1u64 << 26) as f64
    }
}
