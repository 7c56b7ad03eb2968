//! Brute-force evolution on the full `N`-dimensional space.
//!
//! `H = E P_L + E |s⟩⟨s|` is assembled densely and diagonalized once;
//! `exp(-iHt)` is then applied through the eigenbasis. This is the
//! reference the closed-form reduced dynamics are checked against and is
//! never used by the estimation pipeline.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::reduced::{self, ReducedState};
use crate::scenario::SearchScenario;
use crate::state_prep::StatePrep;

pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Hermiticity tolerance for [`full_evolve`].
pub const HERMITIAN_TOL: f64 = 1e-12;

pub type FullState = DVector<Complex64>;

/// Dense `H` for `scenario` and `prep`. Fails above `cap` items.
pub fn full_hamiltonian_capped(
    scenario: &SearchScenario,
    prep: &StatePrep,
    cap: usize,
) -> Result<DMatrix<Complex64>> {
    let n = scenario.n_items();
    if n > cap {
        return Err(SearchError::TooLarge { n, cap });
    }
    if prep.n_items() != n {
        return Err(SearchError::DimensionMismatch {
            expected: n,
            got: prep.n_items(),
        });
    }
    let e = scenario.energy();
    let beta = &prep.beta;
    let mut h = DMatrix::from_fn(n, n, |i, j| Complex64::from(e * beta[i] * beta[j]));
    for &t in scenario.targets() {
        h[(t, t)] += e;
    }
    Ok(h)
}

pub fn full_hamiltonian(scenario: &SearchScenario, prep: &StatePrep) -> Result<DMatrix<Complex64>> {
    full_hamiltonian_capped(scenario, prep, DEFAULT_SIZE_CAP)
}

/// Initial state `|s⟩` as a complex vector.
pub fn initial_state(prep: &StatePrep) -> FullState {
    DVector::from_iterator(
        prep.n_items(),
        prep.beta.iter().map(|&b| Complex64::from(b)),
    )
}

fn hermitian_deviation(h: &DMatrix<Complex64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Spectral factorization of a Hermitian matrix, reusable across times.
///
/// Rows and columns that are identically zero decouple: `exp(-iHt)` acts as
/// the identity on them, so only the remaining block is diagonalized and
/// the decoupled amplitudes are carried through untouched.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    active: Vec<usize>,
    values: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(SearchError::DimensionMismatch {
                expected: h.nrows(),
                got: h.ncols(),
            });
        }
        let dev = hermitian_deviation(h);
        if dev > HERMITIAN_TOL {
            return Err(SearchError::NotHermitian(dev));
        }
        let dim = h.nrows();
        let active: Vec<usize> = (0..dim)
            .filter(|&i| h.row(i).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .collect();
        let block = DMatrix::from_fn(active.len(), active.len(), |i, j| h[(active[i], active[j])]);
        let eig = SymmetricEigen::new(block);
        Ok(Self {
            dim,
            active,
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// Eigenvalues of the full matrix (zeros for decoupled coordinates).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.values.iter().copied().collect();
        all.resize(self.dim, 0.0);
        all
    }

    /// `exp(-iHt) ψ`.
    pub fn apply(&self, psi: &FullState, t: f64) -> Result<FullState> {
        if psi.len() != self.dim {
            return Err(SearchError::DimensionMismatch {
                expected: self.dim,
                got: psi.len(),
            });
        }
        let sub = DVector::from_iterator(self.active.len(), self.active.iter().map(|&i| psi[i]));
        let mut coeffs = self.vectors.ad_mul(&sub);
        for (c, &lambda) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::from_polar(1.0, -lambda * t);
        }
        let evolved = &self.vectors * coeffs;
        let mut out = psi.clone();
        for (k, &i) in self.active.iter().enumerate() {
            out[i] = evolved[k];
        }
        Ok(out)
    }
}

/// `exp(-iHt) ψ` for a one-off evolution.
pub fn full_evolve(h: &DMatrix<Complex64>, initial: &FullState, t: f64) -> Result<FullState> {
    Propagator::new(h)?.apply(initial, t)
}

/// Orthonormal real basis `{|w̃⟩, |r⟩}` of the invariant plane; `|r⟩` is
/// absent when the residual is empty.
#[derive(Debug, Clone)]
pub struct PlaneBasis {
    pub target: DVector<f64>,
    pub residual: Option<DVector<f64>>,
}

impl PlaneBasis {
    pub fn new(prep: &StatePrep) -> Self {
        let target = DVector::from_vec(prep.target_vector());
        let residual =
            (!prep.residual_items.is_empty()).then(|| DVector::from_vec(prep.residual_vector()));
        Self { target, residual }
    }

    fn inner(basis: &DVector<f64>, psi: &FullState) -> Complex64 {
        basis.iter().zip(psi.iter()).map(|(&b, &z)| z * b).sum()
    }

    /// Coordinates of `psi` in `(|w̃⟩, |r⟩)`.
    pub fn project(&self, psi: &FullState) -> ReducedState {
        ReducedState {
            a: Self::inner(&self.target, psi),
            b: self
                .residual
                .as_ref()
                .map_or(Complex64::new(0.0, 0.0), |r| Self::inner(r, psi)),
        }
    }

    /// `‖(I - P_V) ψ‖`.
    pub fn orthogonal_residual(&self, psi: &FullState) -> f64 {
        let coords = self.project(psi);
        let mut rest = psi.clone();
        for (k, z) in rest.iter_mut().enumerate() {
            let mut inplane = coords.a * self.target[k];
            if let Some(r) = &self.residual {
                inplane += coords.b * r[k];
            }
            *z -= inplane;
        }
        rest.norm()
    }
}

/// Outcome of the reduced-versus-full cross-check on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceCheck {
    pub n_items: usize,
    pub y: f64,
    pub optimal_time: f64,
    pub grid_points: usize,
    /// `max_t ‖(I - P_V) ψ(t)‖`.
    pub max_residual: f64,
    /// `max_t max(|a_full - a_reduced|, |b_full - b_reduced|)`.
    pub max_deviation: f64,
    pub max_norm_error: f64,
    pub max_energy_drift: f64,
}

/// `max_t ‖(I - P_V) exp(-iHt)|s⟩‖` over `t_grid`.
pub fn invariant_subspace_residual(
    scenario: &SearchScenario,
    prep: &StatePrep,
    t_grid: &[f64],
) -> Result<f64> {
    Ok(cross_check(scenario, prep, t_grid)?.max_residual)
}

/// Evolves `|s⟩` exactly on the full space over `t_grid` and compares with
/// the closed-form reduced state at each time.
pub fn cross_check(
    scenario: &SearchScenario,
    prep: &StatePrep,
    t_grid: &[f64],
) -> Result<SubspaceCheck> {
    let h = full_hamiltonian(scenario, prep)?;
    let prop = Propagator::new(&h)?;
    let basis = PlaneBasis::new(prep);
    let s = initial_state(prep);
    let energy0 = expectation(&h, &s);
    let e = scenario.energy();

    let mut check = SubspaceCheck {
        n_items: scenario.n_items(),
        y: prep.y,
        optimal_time: reduced::optimal_time(prep.y, e)?,
        grid_points: t_grid.len(),
        max_residual: 0.0,
        max_deviation: 0.0,
        max_norm_error: 0.0,
        max_energy_drift: 0.0,
    };
    for &t in t_grid {
        let psi = prop.apply(&s, t)?;
        let full = basis.project(&psi);
        let closed = reduced::evolve_state(prep, e, t)?;
        check.max_residual = check.max_residual.max(basis.orthogonal_residual(&psi));
        let dev = (full.a - closed.a).norm().max((full.b - closed.b).norm());
        check.max_deviation = check.max_deviation.max(dev);
        check.max_norm_error = check.max_norm_error.max((psi.norm() - 1.0).abs());
        check.max_energy_drift = check
            .max_energy_drift
            .max((expectation(&h, &psi) - energy0).abs());
    }
    Ok(check)
}

/// `⟨ψ|H|ψ⟩`, real for Hermitian `H`.
pub fn expectation(h: &DMatrix<Complex64>, psi: &FullState) -> f64 {
    psi.dotc(&(h * psi)).re
}

/// `points` evenly spaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect()
}
