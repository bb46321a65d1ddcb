//! Deterministic, counter-addressable random streams.
//!
//! Each (seed, counter) pair names an independent ChaCha8 stream: the 256-bit
//! key is expanded from the 64-bit seed with SplitMix64 and the counter
//! selects the ChaCha stream id. Parallel consumers can therefore draw from
//! disjoint substreams without any ordering between them.
//!
//! Standard normals use the cosine branch of Box-Muller, two 64-bit words per
//! variate, no caching of the sine partner. The scheme is identified by
//! [`RNG_LABEL`] wherever reproducibility is promised.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifies the generator + normal-variate recipe of this build.
pub const RNG_LABEL: &str = "chacha8/splitmix64-key/box-muller-cos";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A stream of standard normal variates addressed by (seed, counter).
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn for_trial(seed: u64, counter: u64) -> NormalStream {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(counter);
        NormalStream { rng }
    }

    /// Uniform in (0, 1]: 53 mantissa bits, shifted away from zero.
    fn uniform_open_zero(&mut self) -> f64 {
        (((self.rng.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, 1).
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// One standard normal variate.
    pub fn standard(&mut self) -> f64 {
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn fill_standard(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.standard();
        }
    }
}
