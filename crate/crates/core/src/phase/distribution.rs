//! Walk operator, ancilla state and the exact register distribution.

use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::qft::{check_register_size, inverse_qft};
use crate::error::{Result, SearchError};
use crate::reduced::{self, check_overlap, Mat2};
use crate::rng::CdfSampler;
use crate::state_prep::StatePrep;

/// Distances below this count as an exact hit of the removable singularity.
const SINGULAR_TOL: f64 = 1e-12;

/// Slack for the integer-scale window comparisons `|k - My| <= m`.
const WINDOW_TOL: f64 = 1e-9;

/// `d(y1, y2) = min_j |y1 - y2 + j|`, in `[0, 1/2]`.
pub fn circle_distance(y1: f64, y2: f64) -> f64 {
    let x = (y1 - y2).rem_euclid(1.0);
    x.min(1.0 - x)
}

/// `Q = exp(-iH·2π/E)`; eigenvalues `exp(∓2πiy)` on `X1`, `X2`.
pub fn walk_operator(y: f64, energy: f64) -> Result<Mat2> {
    reduced::evolution_matrix(y, energy, 2.0 * std::f64::consts::PI / energy)
}

/// Joint register ⊗ plane state, stored as `M` rows of
/// `[X2 component, X1 component]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaState {
    pub m_size: usize,
    pub coeffs: Vec<[Complex64; 2]>,
}

impl AncillaState {
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|[x2, x1]| x2.norm_sqr() + x1.norm_sqr())
            .sum()
    }

    /// Applies `F_M^{-1}` to the register, giving `|Ψ2⟩`.
    pub fn apply_inverse_qft(&self) -> Result<AncillaState> {
        let low: Vec<Complex64> = self.coeffs.iter().map(|c| c[0]).collect();
        let high: Vec<Complex64> = self.coeffs.iter().map(|c| c[1]).collect();
        let low = inverse_qft(&low)?;
        let high = inverse_qft(&high)?;
        Ok(AncillaState {
            m_size: self.m_size,
            coeffs: low.into_iter().zip(high).map(|(a, b)| [a, b]).collect(),
        })
    }

    /// Probability of each register outcome, tracing out the plane.
    pub fn register_marginal(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|[x2, x1]| x2.norm_sqr() + x1.norm_sqr())
            .collect()
    }
}

/// `|Ψ1⟩ = M^{-1/2} Σ_m |m⟩ ⊗ Q^m |s⟩` written in the eigenbasis.
///
/// The `M^{-1/2}` factor makes the state unit norm.
pub fn build_psi1(prep: &StatePrep, m_size: usize) -> Result<AncillaState> {
    build_psi1_from_overlap(prep.y, m_size)
}

pub fn build_psi1_from_overlap(y: f64, m_size: usize) -> Result<AncillaState> {
    check_overlap(y)?;
    check_register_size(m_size)?;
    let scale = 1.0 / (m_size as f64).sqrt();
    let w2 = ((1.0 - y) / 2.0).max(0.0).sqrt() * scale;
    let w1 = ((1.0 + y) / 2.0).sqrt() * scale;
    let tau = 2.0 * std::f64::consts::PI;
    let coeffs = (0..m_size)
        .map(|m| {
            let m = m as f64;
            [
                Complex64::from_polar(w2, tau * m * y),
                Complex64::from_polar(w1, tau * m * (1.0 - y)),
            ]
        })
        .collect();
    Ok(AncillaState { m_size, coeffs })
}

/// `|α_k(ω)|²` for the state `|ω̃⟩`:
/// `sin²(πM d) / (M² sin²(π d))` with `d = d(ω, k/M)`, and exactly 1 at
/// `d = 0`.
pub fn alpha_sq(omega: f64, k: usize, m_size: usize) -> f64 {
    let m = m_size as f64;
    let d = circle_distance(omega, k as f64 / m);
    if d < SINGULAR_TOL {
        return 1.0;
    }
    let pi = std::f64::consts::PI;
    let ratio = (pi * m * d).sin() / (m * (pi * d).sin());
    ratio * ratio
}

/// Exact statistics of the register after `F_M^{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDistribution {
    pub y: f64,
    pub m_size: usize,
    /// Mixture `P(k)`.
    pub probs: Vec<f64>,
    /// `P(k | ỹ branch) = |α_k(y)|²`.
    pub given_y: Vec<f64>,
    /// `P(k | 1-y branch) = |α_k(1-y)|²`.
    pub given_one_minus_y: Vec<f64>,
    /// `(1 - y)/2`.
    pub weight_y: f64,
    /// `(1 + y)/2`.
    pub weight_one_minus_y: f64,
}

/// Which collapse branch of `|Ψ2⟩` a conditional refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|ỹ⟩ ⊗ X2`, weight `(1-y)/2`, peaks at `k ≈ My`.
    Y,
    /// `|(1-y)~⟩ ⊗ X1`, weight `(1+y)/2`, peaks at `k ≈ M(1-y)`.
    OneMinusY,
}

impl MeasurementDistribution {
    pub fn conditional(&self, branch: Branch) -> &[f64] {
        match branch {
            Branch::Y => &self.given_y,
            Branch::OneMinusY => &self.given_one_minus_y,
        }
    }

    /// Phase the given branch encodes.
    pub fn branch_phase(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Y => self.y,
            Branch::OneMinusY => 1.0 - self.y,
        }
    }

    /// `P(d(ω, k/M) <= radius/M | branch)` with `ω` the branch phase.
    pub fn window_probability(&self, branch: Branch, radius: f64) -> f64 {
        let center = self.branch_phase(branch) * self.m_size as f64;
        let m = self.m_size as f64;
        self.conditional(branch)
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let x = (center - *k as f64).rem_euclid(m);
                x.min(m - x) <= radius + WINDOW_TOL
            })
            .map(|(_, p)| p)
            .sum()
    }

    pub fn sampler(&self) -> Result<CdfSampler> {
        CdfSampler::new(&self.probs)
    }
}

/// Closed-form distribution of the register outcome.
pub fn measurement_distribution(y: f64, m_size: usize) -> Result<MeasurementDistribution> {
    check_overlap(y)?;
    check_register_size(m_size)?;
    let given_y: Vec<f64> = (0..m_size).map(|k| alpha_sq(y, k, m_size)).collect();
    let given_one_minus_y: Vec<f64> = (0..m_size).map(|k| alpha_sq(1.0 - y, k, m_size)).collect();
    let weight_y = (1.0 - y) / 2.0;
    let weight_one_minus_y = (1.0 + y) / 2.0;
    let probs = given_y
        .iter()
        .zip(&given_one_minus_y)
        .map(|(a, b)| weight_y * a + weight_one_minus_y * b)
        .collect();
    Ok(MeasurementDistribution {
        y,
        m_size,
        probs,
        given_y,
        given_one_minus_y,
        weight_y,
        weight_one_minus_y,
    })
}

/// Register marginal obtained by building `|Ψ1⟩` and applying `F_M^{-1}`.
pub fn simulated_register_distribution(y: f64, m_size: usize) -> Result<Vec<f64>> {
    Ok(build_psi1_from_overlap(y, m_size)?
        .apply_inverse_qft()?
        .register_marginal())
}

/// `n_samples` i.i.d. register outcomes.
pub fn sample_phase_register<R: RngCore + ?Sized>(
    y: f64,
    m_size: usize,
    n_samples: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n_samples == 0 {
        return Err(SearchError::NoSamples);
    }
    let sampler = measurement_distribution(y, m_size)?.sampler()?;
    Ok((0..n_samples).map(|_| sampler.sample(rng)).collect())
}

/// One tail-bound row: the exact conditional window mass against
/// `1 - 1/(2(m-1))` for both branches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub m: f64,
    pub bound: f64,
    pub prob_y: f64,
    pub prob_one_minus_y: f64,
    pub satisfied: bool,
}

/// Exact check of the phase-estimation guarantees for one `(y, M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBoundReport {
    pub y: f64,
    pub m_size: usize,
    /// `P(d <= 1/M | branch)` for both branches, to compare with `8/π²`.
    pub near_prob_y: f64,
    pub near_prob_one_minus_y: f64,
    pub near_satisfied: bool,
    pub rows: Vec<TailRow>,
    /// `max_k P(k | branch) · (2M d)²` over `d > 0`; at most 1 when the
    /// pointwise bound holds.
    pub max_pointwise_ratio: f64,
    pub pointwise_satisfied: bool,
    pub satisfied: bool,
}

/// `8/π²`.
pub fn near_bound() -> f64 {
    8.0 / (std::f64::consts::PI * std::f64::consts::PI)
}

pub fn tail_bound_report(y: f64, m_size: usize, m_values: &[f64]) -> Result<TailBoundReport> {
    if let Some(&bad) = m_values.iter().find(|&&m| m.is_nan() || m <= 1.0) {
        return Err(SearchError::BadTailParameter(bad));
    }
    let dist = measurement_distribution(y, m_size)?;
    let rows: Vec<TailRow> = m_values
        .iter()
        .map(|&m| {
            let bound = 1.0 - 1.0 / (2.0 * (m - 1.0));
            let prob_y = dist.window_probability(Branch::Y, m);
            let prob_one_minus_y = dist.window_probability(Branch::OneMinusY, m);
            TailRow {
                m,
                bound,
                prob_y,
                prob_one_minus_y,
                satisfied: prob_y >= bound - WINDOW_TOL && prob_one_minus_y >= bound - WINDOW_TOL,
            }
        })
        .collect();

    let mf = m_size as f64;
    let mut max_ratio = 0.0f64;
    for branch in [Branch::Y, Branch::OneMinusY] {
        let omega = dist.branch_phase(branch);
        for (k, p) in dist.conditional(branch).iter().enumerate() {
            let d = circle_distance(omega, k as f64 / mf);
            if d > SINGULAR_TOL {
                max_ratio = max_ratio.max(p * (2.0 * mf * d).powi(2));
            }
        }
    }
    let near_prob_y = dist.window_probability(Branch::Y, 1.0);
    let near_prob_one_minus_y = dist.window_probability(Branch::OneMinusY, 1.0);
    let near_satisfied = near_prob_y >= near_bound() && near_prob_one_minus_y >= near_bound();
    let pointwise_satisfied = max_ratio <= 1.0 + WINDOW_TOL;
    let satisfied = near_satisfied && pointwise_satisfied && rows.iter().all(|r| r.satisfied);
    Ok(TailBoundReport {
        y,
        m_size,
        near_prob_y,
        near_prob_one_minus_y,
        near_satisfied,
        rows,
        max_pointwise_ratio: max_ratio,
        pointwise_satisfied,
        satisfied,
    })
}
