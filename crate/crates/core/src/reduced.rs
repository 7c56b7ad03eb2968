//! Closed-form dynamics on the invariant plane `V = span{|w̃⟩, |r⟩}`.
//!
//! Vectors in `V` are written as `(a, b)` with `a` the `|w̃⟩` coefficient.
//! The reduced Hamiltonian is
//!
//! ```text
//! H = E [[1 + y²,        y sqrt(1-y²)],
//!        [y sqrt(1-y²),  1 - y²      ]]
//! ```
//!
//! with eigenvalues `E(1 ± y)`. The propagator is evaluated from its closed
//! form; no time stepping happens anywhere in this module.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::rng;
use crate::state_prep::StatePrep;

pub type Mat2 = Matrix2<Complex64>;

/// Default number of trajectory samples over `[0, 2T]`.
pub const DEFAULT_TRAJECTORY_POINTS: usize = 256;

/// State in `V`: `a |w̃⟩ + b |r⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub a: Complex64,
    pub b: Complex64,
}

impl ReducedState {
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn as_vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.a, self.b)
    }

    /// Probability of landing in the target subspace.
    pub fn success_probability(&self) -> f64 {
        self.a.norm_sqr()
    }
}

pub(crate) fn check_overlap(y: f64) -> Result<()> {
    if y.is_finite() && y > 0.0 && y <= 1.0 {
        Ok(())
    } else {
        Err(SearchError::BadOverlap(y))
    }
}

pub(crate) fn check_energy(energy: f64) -> Result<()> {
    if energy.is_finite() && energy > 0.0 {
        Ok(())
    } else {
        Err(SearchError::BadEnergy(energy))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(SearchError::BadTime(t))
    }
}

fn co_overlap(y: f64) -> f64 {
    ((1.0 - y) * (1.0 + y)).max(0.0).sqrt()
}

pub fn reduced_hamiltonian(y: f64, energy: f64) -> Result<Mat2> {
    check_overlap(y)?;
    check_energy(energy)?;
    let c = co_overlap(y);
    let off = Complex64::from(energy * y * c);
    Ok(Mat2::new(
        Complex64::from(energy * (1.0 + y * y)),
        off,
        off,
        Complex64::from(energy * (1.0 - y * y)),
    ))
}

/// `exp(-i H t)` restricted to `V`.
pub fn evolution_matrix(y: f64, energy: f64, t: f64) -> Result<Mat2> {
    check_overlap(y)?;
    check_energy(energy)?;
    check_time(t)?;
    Ok(propagator(y, energy, t))
}

/// Propagator without argument checks; negative `t` gives the inverse.
pub(crate) fn propagator(y: f64, energy: f64, t: f64) -> Mat2 {
    let c = co_overlap(y);
    let (s, cs) = (energy * y * t).sin_cos();
    let phase = Complex64::from_polar(1.0, -energy * t);
    let i = Complex64::i();
    let off = -i * (c * s);
    Mat2::new(
        phase * Complex64::new(cs, -y * s),
        phase * off,
        phase * off,
        phase * Complex64::new(cs, y * s),
    )
}

/// `ψ(t) = exp(-iHt) |s⟩` in `(a, b)` coordinates.
pub fn evolve_state(prep: &StatePrep, energy: f64, t: f64) -> Result<ReducedState> {
    evolve_from_overlap(prep.y, energy, t)
}

pub fn evolve_from_overlap(y: f64, energy: f64, t: f64) -> Result<ReducedState> {
    check_overlap(y)?;
    check_energy(energy)?;
    check_time(t)?;
    let (s, cs) = (energy * y * t).sin_cos();
    let phase = Complex64::from_polar(1.0, -energy * t);
    Ok(ReducedState {
        a: phase * Complex64::new(y * cs, -s),
        b: phase * (co_overlap(y) * cs),
    })
}

/// `T = π / (2 E y)`, the first time the state lies entirely in the
/// target subspace.
pub fn optimal_time(y: f64, energy: f64) -> Result<f64> {
    check_overlap(y)?;
    check_energy(energy)?;
    Ok(std::f64::consts::PI / (2.0 * energy * y))
}

/// One eigenpair of the reduced Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub vector: Vector2<f64>,
    pub value: f64,
}

/// `(X1, E(1+y))` and `(X2, E(1-y))`.
pub fn eigensystem(y: f64, energy: f64) -> Result<(EigenPair, EigenPair)> {
    check_overlap(y)?;
    check_energy(energy)?;
    let up = (1.0 + y).sqrt();
    let down = (1.0 - y).max(0.0).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok((
        EigenPair {
            vector: Vector2::new(r * up, r * down),
            value: energy * (1.0 + y),
        },
        EigenPair {
            vector: Vector2::new(-r * down, r * up),
            value: energy * (1.0 - y),
        },
    ))
}

/// Measurement statistics over all `N` items at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessDistribution {
    pub t: f64,
    /// Probability of observing each item; sums to one.
    pub item_probs: Vec<f64>,
    pub target_mass: f64,
    pub failure_mass: f64,
}

impl SuccessDistribution {
    /// Draws one item index.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        sample_measurement(&self.item_probs, rng)
    }
}

/// Target item `j` is seen with probability `|a(t)|² β_j² / y²`; non-target
/// support item `i` with `|b(t)|² β_i² / (1 - y²)`.
pub fn success_distribution(prep: &StatePrep, energy: f64, t: f64) -> Result<SuccessDistribution> {
    let state = evolve_state(prep, energy, t)?;
    Ok(distribution_from_state(prep, &state, t))
}

pub(crate) fn distribution_from_state(
    prep: &StatePrep,
    state: &ReducedState,
    t: f64,
) -> SuccessDistribution {
    let mut item_probs = vec![0.0; prep.n_items()];
    let a2 = state.a.norm_sqr();
    let b2 = state.b.norm_sqr();
    for (&i, &c) in prep.target_items.iter().zip(&prep.target_coeffs) {
        item_probs[i] = a2 * c * c;
    }
    for (&i, &c) in prep.residual_items.iter().zip(&prep.residual_coeffs) {
        item_probs[i] = b2 * c * c;
    }
    let failure_mass = if prep.residual_items.is_empty() {
        0.0
    } else {
        b2
    };
    SuccessDistribution {
        t,
        target_mass: a2,
        failure_mass,
        item_probs,
    }
}

/// Draws one index from `probs` with the caller's generator.
pub fn sample_measurement<R: RngCore + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    rng::sample_index(probs, rng)
}

/// One row of a trajectory table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: ReducedState,
    pub success_prob: f64,
}

/// `points` evenly spaced samples on `[0, t_max]`, endpoints included.
pub fn trajectory(y: f64, energy: f64, t_max: f64, points: usize) -> Result<Vec<TrajectoryPoint>> {
    check_time(t_max)?;
    let points = points.max(2);
    (0..points)
        .map(|k| {
            let t = t_max * k as f64 / (points - 1) as f64;
            let state = evolve_from_overlap(y, energy, t)?;
            Ok(TrajectoryPoint {
                t,
                success_prob: state.success_probability(),
                state,
            })
        })
        .collect()
}

/// Trajectory over `[0, 2T]` with the default resolution.
pub fn default_trajectory(y: f64, energy: f64) -> Result<Vec<TrajectoryPoint>> {
    let t = optimal_time(y, energy)?;
    trajectory(y, energy, 2.0 * t, DEFAULT_TRAJECTORY_POINTS)
}
