//! Initial-state preparation and the `(y, |w̃⟩, |r⟩)` split.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::scenario::SearchScenario;

/// Real nonnegative initial amplitudes together with their decomposition
///
/// `|s⟩ = y |w̃⟩ + sqrt(1 - y²) |r⟩`
///
/// where `|w̃⟩` lives on the targets and `|r⟩` on the non-target support.
/// All coefficients are real and nonnegative; the global phase is not
/// observable so no other convention is needed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePrep {
    pub beta: Vec<f64>,
    pub nu: f64,
    pub y: f64,
    pub r_count: usize,
    /// Target items in ascending order; aligned with `target_coeffs`.
    pub target_items: Vec<usize>,
    pub target_coeffs: Vec<f64>,
    /// Non-target items with positive amplitude; aligned with `residual_coeffs`.
    pub residual_items: Vec<usize>,
    pub residual_coeffs: Vec<f64>,
}

impl StatePrep {
    /// Normalizes `raw` and splits it against `targets`.
    pub fn from_amplitudes(raw: &[f64], targets: &BTreeSet<usize>) -> Result<Self> {
        if let Some(&bad) = targets.iter().find(|&&t| t >= raw.len()) {
            return Err(SearchError::IndexOutOfRange {
                index: bad,
                n_items: raw.len(),
            });
        }
        if raw.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(SearchError::BadDistribution(
                "amplitudes must be finite and nonnegative".into(),
            ));
        }
        let nu = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nu == 0.0 {
            return Err(SearchError::ZeroAmplitude);
        }
        let beta: Vec<f64> = raw.iter().map(|a| a / nu).collect();

        let target_items: Vec<usize> = targets.iter().copied().collect();
        let y = target_items
            .iter()
            .map(|&i| beta[i] * beta[i])
            .sum::<f64>()
            .sqrt();
        if y == 0.0 {
            return Err(SearchError::BadOverlap(0.0));
        }
        let target_coeffs = target_items.iter().map(|&i| beta[i] / y).collect();

        let residual_items: Vec<usize> = (0..beta.len())
            .filter(|i| !targets.contains(i) && beta[*i] > 0.0)
            .collect();
        let residual_norm = residual_items
            .iter()
            .map(|&i| beta[i] * beta[i])
            .sum::<f64>()
            .sqrt();
        let residual_coeffs = if residual_norm > 0.0 {
            residual_items
                .iter()
                .map(|&i| beta[i] / residual_norm)
                .collect()
        } else {
            Vec::new()
        };
        // y can round to slightly above one when the residual is empty
        let y = y.min(1.0);

        Ok(Self {
            beta,
            nu,
            y,
            r_count: residual_items.len(),
            target_items,
            target_coeffs,
            residual_items,
            residual_coeffs,
        })
    }

    pub fn n_items(&self) -> usize {
        self.beta.len()
    }

    /// `sqrt(1 - y²)`, computed from the residual mass directly so that it
    /// stays accurate when `y` is close to one.
    pub fn residual_weight(&self) -> f64 {
        self.residual_items
            .iter()
            .map(|&i| self.beta[i] * self.beta[i])
            .sum::<f64>()
            .sqrt()
    }

    /// `|w̃⟩` as a dense vector over all items.
    pub fn target_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n_items()];
        for (&i, &c) in self.target_items.iter().zip(&self.target_coeffs) {
            v[i] = c;
        }
        v
    }

    /// `|r⟩` as a dense vector over all items; all zeros when `y = 1`.
    pub fn residual_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n_items()];
        for (&i, &c) in self.residual_items.iter().zip(&self.residual_coeffs) {
            v[i] = c;
        }
        v
    }

    /// `l + R`: number of items carrying amplitude or marked as target.
    pub fn support_size(&self) -> usize {
        self.target_items.len() + self.r_count
    }
}

/// Unnormalized amplitude of each item: sum of the weights of the sets
/// containing it.
pub fn raw_amplitudes(scenario: &SearchScenario) -> Vec<f64> {
    let mut raw = vec![0.0; scenario.n_items()];
    for set in scenario.info_sets() {
        for &i in set.members() {
            raw[i] += set.weight();
        }
    }
    raw
}

/// Weighted superposition over the information sets.
pub fn weighted_superposition(scenario: &SearchScenario) -> Result<StatePrep> {
    StatePrep::from_amplitudes(&raw_amplitudes(scenario), scenario.targets())
}

/// Uniform superposition over all `N` items; the unstructured baseline.
pub fn uniform_superposition(scenario: &SearchScenario) -> Result<StatePrep> {
    StatePrep::from_amplitudes(&vec![1.0; scenario.n_items()], scenario.targets())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::InformationSet;

    fn set(members: &[usize], w: f64) -> InformationSet {
        InformationSet::new(members.iter().copied(), w)
    }

    fn example_two() -> SearchScenario {
        SearchScenario::new(
            8,
            [0, 1],
            vec![set(&[0, 1, 2], 0.6), set(&[1, 3], 0.4)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn single_item_set() {
        let s = SearchScenario::new(4, [0], vec![set(&[0], 1.0)], 1.0).unwrap();
        let p = weighted_superposition(&s).unwrap();
        assert_eq!(p.nu, 1.0);
        assert_eq!(p.beta, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.y, 1.0);
        assert_eq!(p.r_count, 0);
        assert!(p.residual_coeffs.is_empty());
        assert_eq!(p.residual_weight(), 0.0);
    }

    #[test]
    fn overlapping_sets_hand_sum() {
        let p = weighted_superposition(&example_two()).unwrap();
        let nu = 1.88f64.sqrt();
        assert!((p.nu - nu).abs() < 1e-14);
        let expect = [0.6 / nu, 1.0 / nu, 0.6 / nu, 0.4 / nu, 0.0, 0.0, 0.0, 0.0];
        for (b, e) in p.beta.iter().zip(expect) {
            assert!((b - e).abs() < 1e-14);
        }
        assert!((p.y * p.y - 1.36 / 1.88).abs() < 1e-14);
        assert!((p.y * p.y - 0.723404).abs() < 1e-6);
        assert_eq!(p.r_count, 2);
        assert_eq!(p.residual_items, vec![2, 3]);
    }

    #[test]
    fn misplaced_structure_overlap() {
        let s = SearchScenario::new(3, [0], vec![set(&[0, 1], 0.2), set(&[2], 0.8)], 1.0).unwrap();
        let p = weighted_superposition(&s).unwrap();
        assert!((p.nu * p.nu - 0.72).abs() < 1e-14);
        assert!((p.y - 0.2 / 0.72f64.sqrt()).abs() < 1e-14);
        assert!((p.y - 0.235702).abs() < 1e-6);
    }

    #[test]
    fn uniform_baseline() {
        for (n, l) in [(4usize, 1usize), (100, 25), (8, 2)] {
            let s = SearchScenario::new(n, 0..l, vec![set(&(0..n).collect::<Vec<_>>(), 1.0)], 1.0)
                .unwrap();
            let p = uniform_superposition(&s).unwrap();
            assert!((p.y - 0.5).abs() < 1e-15, "n={n} l={l}");
            assert_eq!(p.r_count, n - l);
            // ‖P_L s‖² / ‖P_L⊥ s‖² = l / (N - l)
            let ratio = p.y * p.y / p.residual_weight().powi(2);
            assert!((ratio - l as f64 / (n - l) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn decomposition_reconstructs_beta() {
        let p = weighted_superposition(&example_two()).unwrap();
        let w = p.target_vector();
        let r = p.residual_vector();
        let rw = p.residual_weight();
        for i in 0..8 {
            assert!((p.y * w[i] + rw * r[i] - p.beta[i]).abs() < 1e-15);
        }
        assert!((p.y * p.y + rw * rw - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_amplitudes_rejected() {
        let t: BTreeSet<usize> = [0].into();
        assert_eq!(
            StatePrep::from_amplitudes(&[0.0, 0.0], &t).unwrap_err(),
            SearchError::ZeroAmplitude
        );
    }
}
