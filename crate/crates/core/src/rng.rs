//! Deterministic random sources: every stochastic routine in the crate is
//! seeded with a 64-bit value and uses ChaCha8, so identical seeds reproduce
//! identical runs bit for bit on any platform.

#[cfg(not(feature = "std"))]
use crate::fx::F64Ext;

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// Stream for a given seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a sub-stream seed; used to give trials and blocks independent
/// streams without correlation between neighbouring indices.
pub fn derive(seed: u64, tag: u64) -> u64 {
    // splitmix64 over the xor; cheap and well mixed.
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard normal via the Marsaglia polar method.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Standard Cauchy deviate.
pub fn standard_cauchy<R: Rng>(rng: &mut R) -> f64 {
    (core::f64::consts::PI * (rng.gen::<f64>() - 0.5)).tan()
}

/// Additive quasi-random sequence (Kronecker sequence on the generalized
/// golden ratios); fills the unit cube far more evenly than pseudo-random
/// draws and is what the minimizer-certification sweeps use.
pub struct QuasiRandom {
    alphas: alloc::vec::Vec<f64>,
    state: alloc::vec::Vec<f64>,
}

impl QuasiRandom {
    pub fn new(dim: usize) -> Self {
        // g solves g^(d+1) = g + 1; alpha_i = g^-(i+1).
        let d = dim as f64;
        let mut g = 1.5f64;
        for _ in 0..64 {
            g = (1.0 + g).powf(1.0 / (d + 1.0));
        }
        let mut alphas = alloc::vec::Vec::with_capacity(dim);
        let mut a = 1.0;
        for _ in 0..dim {
            a /= g;
            alphas.push(a);
        }
        let state = alloc::vec![0.5; dim];
        QuasiRandom { alphas, state }
    }

    /// Next point in [0,1)^d.
    pub fn next_point(&mut self) -> alloc::vec::Vec<f64> {
        for (s, a) in self.state.iter_mut().zip(&self.alphas) {
            *s += a;
            if *s >= 1.0 {
                *s -= 1.0;
            }
        }
        self.state.clone()
    }
}
