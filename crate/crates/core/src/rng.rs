//! Keyed random streams and the elementary samplers.
//!
//! Every random quantity is drawn from a stream keyed by `(master seed,
//! purpose, index)`. Streams with different keys are independent ChaCha8
//! generators, so results do not depend on evaluation order or on how work is
//! split across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};

pub type StreamRng = ChaCha8Rng;

/// What a stream is used for. The discriminant is part of the stream key and
/// must never be reordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    FirstRows = 1,
    SecondRows = 2,
    PlainRows = 3,
    FirstMasks = 4,
    SecondMasks = 5,
    PlainMasks = 6,
    Perturbation = 7,
    Signal = 8,
    PowerInit = 9,
    RandomInit = 10,
    Lambda = 11,
    Trial = 12,
    Test = 13,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed, e.g. a per-trial master seed from a run seed.
pub fn derive_seed(seed: u64, purpose: Purpose, index: u64) -> u64 {
    let mut state = seed;
    let a = splitmix64(&mut state);
    let mut state = a ^ (purpose as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    let b = splitmix64(&mut state);
    let mut state = b ^ index.wrapping_mul(0xA076_1D64_78BD_642F);
    splitmix64(&mut state)
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> StreamRng {
    let mut state = derive_seed(seed, purpose, index);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Circularly-symmetric complex Gaussian with `E|z|² = 1`: real and imaginary
/// parts independent `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(s * standard_normal(rng), s * standard_normal(rng))
}

pub fn complex_gaussian_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Inverse-CDF exponential draw `−mean·ln(1 − U)`.
pub fn sample_exponential<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<f64> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::InvalidParameter(format!("exponential mean must be > 0, got {mean}")));
    }
    let u: f64 = rng.random();
    Ok(-mean * (1.0 - u).ln())
}

/// Exact Poisson draw; rate 0 always yields 0.
pub fn sample_poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<u64> {
    if rate == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(rate)
        .map_err(|e| Error::InvalidParameter(format!("poisson rate {rate}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}
