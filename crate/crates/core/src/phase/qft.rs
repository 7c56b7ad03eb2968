//! Quantum Fourier transform on an `M = 2^n` register.
//!
//! Convention:
//!
//! ```text
//! F_M      |x⟩ = M^{-1/2} Σ_k exp(+2πi kx/M) |k⟩
//! F_M^{-1} |x⟩ = M^{-1/2} Σ_k exp(-2πi kx/M) |k⟩
//! ```
//!
//! Evaluated as a dense sum with an exact twiddle table indexed by
//! `k·x mod M`; register sizes here are small.

use num_complex::Complex64;

use crate::error::{Result, SearchError};

pub fn check_register_size(m: usize) -> Result<u32> {
    if m < 2 {
        return Err(SearchError::RegisterTooSmall(m));
    }
    if !m.is_power_of_two() {
        return Err(SearchError::NotPowerOfTwo(m));
    }
    Ok(m.trailing_zeros())
}

fn transform(input: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    let m = input.len();
    if !m.is_power_of_two() {
        return Err(SearchError::NotPowerOfTwo(m));
    }
    let twiddle: Vec<Complex64> = (0..m)
        .map(|j| {
            Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * j as f64 / m as f64)
        })
        .collect();
    let scale = 1.0 / (m as f64).sqrt();
    Ok((0..m)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(x, &v)| v * twiddle[(k * x) % m])
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// `F_M^{-1}` applied to a register vector.
pub fn inverse_qft(register: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(register, -1.0)
}

/// `F_M` applied to a register vector.
pub fn qft(register: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(register, 1.0)
}

/// Gate count of the textbook QFT circuit on `n = log2 M` qubits:
/// `n` Hadamards plus `n(n-1)/2` controlled phase rotations.
pub fn qft_gate_count(m: usize) -> Result<usize> {
    if !m.is_power_of_two() {
        return Err(SearchError::NotPowerOfTwo(m));
    }
    let n = m.trailing_zeros() as usize;
    Ok(n * (n + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basis_zero_goes_uniform() {
        for m in [2usize, 8, 32] {
            let mut v = vec![Complex64::new(0.0, 0.0); m];
            v[0] = Complex64::new(1.0, 0.0);
            let out = inverse_qft(&v).unwrap();
            let u = 1.0 / (m as f64).sqrt();
            assert!(out
                .iter()
                .all(|z| (z - Complex64::new(u, 0.0)).norm() < 1e-15));
        }
    }

    #[test]
    fn character_goes_to_basis_state() {
        let m = 16;
        let v: Vec<Complex64> = (0..m)
            .map(|x| Complex64::from_polar(1.0 / 4.0, 2.0 * PI * x as f64 * 3.0 / m as f64))
            .collect();
        let out = inverse_qft(&v).unwrap();
        for (k, z) in out.iter().enumerate() {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn round_trip() {
        let v: Vec<Complex64> = (0..8)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let back = qft(&inverse_qft(&v).unwrap()).unwrap();
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert_eq!(
            inverse_qft(&[Complex64::new(1.0, 0.0); 6]).unwrap_err(),
            SearchError::NotPowerOfTwo(6)
        );
        assert_eq!(
            qft_gate_count(12).unwrap_err(),
            SearchError::NotPowerOfTwo(12)
        );
        assert_eq!(
            check_register_size(1).unwrap_err(),
            SearchError::RegisterTooSmall(1)
        );
    }

    #[test]
    fn gate_counts() {
        assert_eq!(qft_gate_count(2).unwrap(), 1);
        assert_eq!(qft_gate_count(8).unwrap(), 6);
        assert_eq!(qft_gate_count(1024).unwrap(), 55);
    }
}
