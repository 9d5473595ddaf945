//! Counter-based random numbers.
//!
//! Every draw is a pure function of `(seed, stream, index)`:
//!
//! ```text
//! mix(z):  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!          z ^= z >> 27; z *= 0x94D049BB133111EB;
//!          z ^= z >> 31
//! bits(seed, stream, index) = mix(mix(seed ^ mix(stream)) + index · 0x9E3779B97F4A7C15)
//! ```
//!
//! with wrapping 64-bit arithmetic (the SplitMix64 finaliser). Uniforms
//! are `(bits >> 11) · 2⁻⁵³ ∈ [0, 1)`; the `k`-th standard normal of a stream
//! uses indices `2k` and `2k + 1` through Box–Muller,
//! `√(−2 ln(1 − u₀)) · cos(2π u₁)`. Streams are independent trials, so a run
//! with more trials extends, and never changes, a run with fewer.

use std::f64::consts::PI;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    pub seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed }
    }

    pub fn bits(&self, stream: u64, index: u64) -> u64 {
        mix(mix(self.seed ^ mix(stream)).wrapping_add(index.wrapping_mul(GAMMA)))
    }

    pub fn uniform(&self, stream: u64, index: u64) -> f64 {
        (self.bits(stream, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&self, stream: u64, k: u64) -> f64 {
        let u0 = self.uniform(stream, 2 * k);
        let u1 = self.uniform(stream, 2 * k + 1);
        (-2.0 * (-u0).ln_1p()).sqrt() * (2.0 * PI * u1).cos()
    }

    /// Uniform integer in `0..=max`.
    pub fn below_or_equal(&self, stream: u64, index: u64, max: u64) -> u64 {
        self.bits(stream, index) % (max + 1)
    }
}

/// Largest degree of the random polynomials.
pub const MAX_DEGREE: u64 = 30;

/// Random polynomial of trial `trial`: degree `bits(seed, trial, 0) mod 31`,
/// then i.i.d. standard normal coefficients (normals `1, 2, …` of the
/// stream).
pub fn random_polynomial(rng: &CounterRng, trial: u64) -> Vec<f64> {
    let degree = rng.below_or_equal(trial, 0, MAX_DEGREE);
    (0..=degree).map(|k| rng.normal(trial, 1 + k)).collect()
}
