//! Seeded randomness.
//!
//! Every random draw in the crate comes from ChaCha20 (`rand_chacha` 0.9,
//! 20 rounds, 64-bit stream id). A run seed `s` and a purpose tag `tag`
//! select key `s` and stream `fnv1a64(tag)`, so independent consumers of
//! one top-level seed never share a keystream. Uniform reals are
//! `(next_u64 >> 11) * 2^-53`, which is exact and platform independent.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Result, SearchError};

pub const GENERATOR_NAME: &str = "chacha20/rand_chacha-0.9";

/// Tolerance on the total mass of a distribution handed to the samplers.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-9;

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generator for `(seed, tag)`.
pub fn stream(seed: u64, tag: &str) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a64(tag.as_bytes()));
    rng
}

/// Derives a child seed, e.g. one per trial of a sweep.
pub fn sub_seed(seed: u64, tag: &str, index: u64) -> u64 {
    let mut rng = stream(seed, tag);
    rng.set_word_pos(u128::from(index) * 16);
    rng.next_u64()
}

pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `lo..=hi` by rejection, no modulo bias.
pub fn uniform_int<R: RngCore + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    debug_assert!(lo <= hi);
    let span = (hi - lo) as u64 + 1;
    if span == 0 {
        return lo + rng.next_u64() as usize;
    }
    let zone = u64::MAX - (u64::MAX % span);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return lo + (v % span) as usize;
        }
    }
}

/// Validates a probability vector: finite, nonnegative, sums to one
/// within [`DISTRIBUTION_SUM_TOL`].
pub fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(SearchError::BadDistribution("empty".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(SearchError::BadDistribution(format!("invalid entry {p}")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOL {
        return Err(SearchError::BadDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// Inverse-CDF draw of one index. Zero-probability entries are never
/// returned.
pub fn sample_index<R: RngCore + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    check_distribution(probs)?;
    let total: f64 = probs.iter().sum();
    Ok(draw(probs, total, rng))
}

/// Cumulative sampler for repeated draws from one distribution.
#[derive(Debug, Clone)]
pub struct CdfSampler {
    cdf: Vec<f64>,
}

impl CdfSampler {
    pub fn new(probs: &[f64]) -> Result<Self> {
        check_distribution(probs)?;
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self { cdf })
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("nonempty");
        let u = uniform01(rng) * total;
        // first index whose cumulative mass exceeds u
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.last_positive())
    }

    fn last_positive(&self) -> usize {
        let mut prev = 0.0;
        let mut last = 0;
        for (i, &c) in self.cdf.iter().enumerate() {
            if c > prev {
                last = i;
            }
            prev = c;
        }
        last
    }
}

fn draw<R: RngCore + ?Sized>(probs: &[f64], total: f64, rng: &mut R) -> usize {
    let u = uniform01(rng) * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}
