//! Counter-based per-pixel random generation.
//!
//! Every random draw is keyed by (seed, stream, row, col): the 32-byte
//! ChaCha8 key is the little-endian packing of those four 64-bit values.
//! Generation over any tiling is therefore bit-identical to serial
//! generation, and distinct streams are independent.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream identifiers partition the key space between producers.
/// Scene synthesis and noise injection use disjoint stream ranges so the
/// same user seed never aliases across stages.
pub mod stream {
    /// Shared common component of a synthesized stack.
    pub const SCENE_COMMON: u64 = 0;
    /// Markov-chain innovation for acquisition `i`.
    pub fn scene_chain(i: usize) -> u64 {
        1 + i as u64
    }
    /// Per-acquisition independent innovation for acquisition `i`.
    pub fn scene_innovation(i: usize) -> u64 {
        1 + (1 << 20) + i as u64
    }
    /// Injected thermal noise for SLC index `i`.
    pub fn noise(i: usize) -> u64 {
        (1 << 40) + i as u64
    }
}

/// Deterministic generator for one (seed, stream, pixel) cell.
pub fn pixel_rng(seed: u64, stream: u64, row: usize, col: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&(row as u64).to_le_bytes());
    key[24..32].copy_from_slice(&(col as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// One pair of independent standard normals (Box-Muller).
pub fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // u1 in (0, 1] so the log is finite.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Zero-mean circular complex Gaussian with unit total power
/// (each component has variance 1/2).
pub fn unit_circular_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let (a, b) = standard_normal_pair(rng);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}
