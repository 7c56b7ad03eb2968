//! Database model: items, hidden targets, weighted information sets.
//!
//! Items are plain indices `0..n_items`. The target set is only reachable
//! through [`Oracle`] on the estimation paths; analysis code may read it
//! directly through [`SearchScenario::targets`].

use std::cell::Cell;
use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};

/// Absolute tolerance on the weight sum for strict construction.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// One information set `A_j` with its reliability weight `alpha_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationSet {
    members: BTreeSet<usize>,
    weight: f64,
}

impl InformationSet {
    /// Duplicate members are collapsed.
    pub fn new(members: impl IntoIterator<Item = usize>, weight: f64) -> Self {
        Self {
            members: members.into_iter().collect(),
            weight,
        }
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.members.contains(&item)
    }
}

/// Whether every information set meets the target set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Confidence {
    Basic,
    NotBasic,
}

/// Confidence class plus `|A_j ∩ T|` for each set, in set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceReport {
    pub class: Confidence,
    pub intersections: Vec<usize>,
}

/// A validated search problem.
///
/// Invariants checked at construction: `1 <= l <= N`, all indices in range,
/// every set nonempty with weight in `(0, 1]`, weights summing to one and
/// `T ⊆ A_1 ∪ … ∪ A_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchScenario {
    n_items: usize,
    targets: BTreeSet<usize>,
    info_sets: Vec<InformationSet>,
    energy: f64,
    weights_renormalized: bool,
    labels: Option<Vec<String>>,
}

impl SearchScenario {
    /// Strict constructor: weights must already sum to one within
    /// [`WEIGHT_SUM_TOL`].
    pub fn new(
        n_items: usize,
        targets: impl IntoIterator<Item = usize>,
        info_sets: Vec<InformationSet>,
        energy: f64,
    ) -> Result<Self> {
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        check_weights_positive(&info_sets)?;
        let sum: f64 = info_sets.iter().map(|s| s.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(SearchError::WeightSum { sum });
        }
        Self::build(n_items, targets, info_sets, energy, false)
    }

    /// Accepts any positive raw weights and rescales them to sum to one.
    /// [`Self::weights_renormalized`] reports whether a rescale was needed.
    pub fn with_raw_weights(
        n_items: usize,
        targets: impl IntoIterator<Item = usize>,
        info_sets: Vec<InformationSet>,
        energy: f64,
    ) -> Result<Self> {
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        check_weights_positive(&info_sets)?;
        let sum: f64 = info_sets.iter().map(|s| s.weight).sum();
        let renormalized = (sum - 1.0).abs() > WEIGHT_SUM_TOL;
        let info_sets = if renormalized {
            info_sets
                .into_iter()
                .map(|s| InformationSet {
                    weight: s.weight / sum,
                    members: s.members,
                })
                .collect()
        } else {
            info_sets
        };
        Self::build(n_items, targets, info_sets, energy, renormalized)
    }

    fn build(
        n_items: usize,
        targets: BTreeSet<usize>,
        info_sets: Vec<InformationSet>,
        energy: f64,
        weights_renormalized: bool,
    ) -> Result<Self> {
        if n_items == 0 {
            return Err(SearchError::EmptyDatabase);
        }
        if targets.is_empty() {
            return Err(SearchError::EmptyTargets);
        }
        if let Some(&bad) = targets.iter().find(|&&t| t >= n_items) {
            return Err(SearchError::IndexOutOfRange {
                index: bad,
                n_items,
            });
        }
        if info_sets.is_empty() {
            return Err(SearchError::NoInfoSets);
        }
        for (j, set) in info_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(SearchError::EmptyInfoSet { set: j });
            }
            if let Some(&bad) = set.members.iter().find(|&&i| i >= n_items) {
                return Err(SearchError::IndexOutOfRange {
                    index: bad,
                    n_items,
                });
            }
            if !(set.weight > 0.0 && set.weight <= 1.0 + WEIGHT_SUM_TOL) {
                return Err(SearchError::BadWeight {
                    set: j,
                    weight: set.weight,
                });
            }
        }
        if !(energy.is_finite() && energy > 0.0) {
            return Err(SearchError::BadEnergy(energy));
        }
        if let Some(item) = first_uncovered(&targets, &info_sets) {
            return Err(SearchError::CoverageViolation { item });
        }
        Ok(Self {
            n_items,
            targets,
            info_sets,
            energy,
            weights_renormalized,
            labels: None,
        })
    }

    /// Attaches display labels; they carry no meaning for the dynamics.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn with_energy(mut self, energy: f64) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(SearchError::BadEnergy(energy));
        }
        self.energy = energy;
        Ok(self)
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    /// Direct read access for verification and analysis code.
    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn info_sets(&self) -> &[InformationSet] {
        &self.info_sets
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// True when the input weights did not sum to one and were rescaled.
    pub fn weights_renormalized(&self) -> bool {
        self.weights_renormalized
    }

    /// `A_1 ∪ … ∪ A_n`, of size `l + R` whenever every set member carries
    /// positive amplitude.
    pub fn support(&self) -> BTreeSet<usize> {
        self.info_sets
            .iter()
            .flat_map(|s| s.members.iter().copied())
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.support().len()
    }

    /// Black-box predicate `f(item)`: true iff `item ∈ T`.
    pub fn oracle_eval(&self, item: usize) -> Result<bool> {
        if item >= self.n_items {
            return Err(SearchError::IndexOutOfRange {
                index: item,
                n_items: self.n_items,
            });
        }
        Ok(self.targets.contains(&item))
    }

    /// Query-counting handle used by the estimation paths.
    pub fn oracle(&self) -> Oracle<'_> {
        Oracle {
            scenario: self,
            queries: Cell::new(0),
        }
    }

    pub fn validate_coverage(&self) -> bool {
        first_uncovered(&self.targets, &self.info_sets).is_none()
    }

    pub fn classify_confidence(&self) -> Result<ConfidenceReport> {
        if let Some(item) = first_uncovered(&self.targets, &self.info_sets) {
            return Err(SearchError::CoverageViolation { item });
        }
        let intersections: Vec<usize> = self
            .info_sets
            .iter()
            .map(|s| s.members.intersection(&self.targets).count())
            .collect();
        let class = if intersections.iter().all(|&c| c > 0) {
            Confidence::Basic
        } else {
            Confidence::NotBasic
        };
        Ok(ConfidenceReport {
            class,
            intersections,
        })
    }

    /// True when no item belongs to two different sets.
    pub fn is_pairwise_disjoint(&self) -> bool {
        let total: usize = self.info_sets.iter().map(InformationSet::len).sum();
        total == self.support_size()
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            n_items: self.n_items,
            targets: self.targets.iter().copied().collect(),
            info_sets: self
                .info_sets
                .iter()
                .map(|s| InfoSetFile {
                    members: s.members.iter().copied().collect(),
                    weight: s.weight,
                })
                .collect(),
            energy: self.energy,
            labels: self.labels.clone(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| SearchError::Parse(e.to_string()))?;
        file.into_scenario()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| SearchError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

/// Query-counting view of the oracle. Holds no mutable shared state
/// beyond its own counter.
#[derive(Debug)]
pub struct Oracle<'a> {
    scenario: &'a SearchScenario,
    queries: Cell<u64>,
}

impl Oracle<'_> {
    pub fn eval(&self, item: usize) -> Result<bool> {
        self.queries.set(self.queries.get() + 1);
        self.scenario.oracle_eval(item)
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }
}

/// On-disk scenario schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub n_items: usize,
    pub targets: Vec<usize>,
    pub info_sets: Vec<InfoSetFile>,
    #[serde(default = "default_energy")]
    pub energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoSetFile {
    pub members: Vec<usize>,
    pub weight: f64,
}

fn default_energy() -> f64 {
    1.0
}

impl ScenarioFile {
    /// Validates and builds the scenario; raw weights are rescaled to sum
    /// to one.
    pub fn into_scenario(self) -> Result<SearchScenario> {
        let sets = self
            .info_sets
            .into_iter()
            .map(|s| InformationSet::new(s.members, s.weight))
            .collect();
        let scenario =
            SearchScenario::with_raw_weights(self.n_items, self.targets, sets, self.energy)?;
        Ok(match self.labels {
            Some(labels) => scenario.with_labels(labels),
            None => scenario,
        })
    }
}

fn check_weights_positive(sets: &[InformationSet]) -> Result<()> {
    for (j, s) in sets.iter().enumerate() {
        if !(s.weight.is_finite() && s.weight > 0.0) {
            return Err(SearchError::BadWeight {
                set: j,
                weight: s.weight,
            });
        }
    }
    Ok(())
}

fn first_uncovered(targets: &BTreeSet<usize>, sets: &[InformationSet]) -> Option<usize> {
    targets
        .iter()
        .copied()
        .find(|t| !sets.iter().any(|s| s.contains(*t)))
}

/// Coverage check on raw parts, usable before a scenario exists.
pub fn covers(targets: &BTreeSet<usize>, sets: &[InformationSet]) -> bool {
    first_uncovered(targets, sets).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(members: &[usize], w: f64) -> InformationSet {
        InformationSet::new(members.iter().copied(), w)
    }

    #[test]
    fn oracle_marks_targets() {
        let s = SearchScenario::new(8, [0, 1], vec![set(&[0, 1, 2], 1.0)], 1.0).unwrap();
        assert!(s.oracle_eval(0).unwrap());
        assert!(!s.oracle_eval(5).unwrap());
        assert!(matches!(
            s.oracle_eval(8),
            Err(SearchError::IndexOutOfRange { index: 8, .. })
        ));
        let hits = (0..8).filter(|&i| s.oracle_eval(i).unwrap()).count();
        assert_eq!(hits, 2);
    }

    #[test]
    fn oracle_all_targets() {
        let s = SearchScenario::new(4, 0..4, vec![set(&[0, 1, 2, 3], 1.0)], 1.0).unwrap();
        assert!((0..4).all(|i| s.oracle_eval(i).unwrap()));
    }

    #[test]
    fn oracle_handle_counts_queries() {
        let s = SearchScenario::new(4, [2], vec![set(&[2, 3], 1.0)], 1.0).unwrap();
        let o = s.oracle();
        assert!(o.eval(2).unwrap());
        assert!(!o.eval(3).unwrap());
        assert_eq!(o.queries(), 2);
    }

    #[test]
    fn coverage() {
        let t: BTreeSet<usize> = [0, 1].into();
        assert!(covers(&t, &[set(&[0, 1, 2], 1.0)]));
        assert!(!covers(&t, &[set(&[0, 2], 1.0)]));
        let t: BTreeSet<usize> = [0].into();
        assert!(covers(&t, &[set(&[1], 0.5), set(&[0], 0.5)]));
    }

    #[test]
    fn construction_rejects_uncovered_target() {
        let err = SearchScenario::new(4, [0, 1], vec![set(&[0, 2], 1.0)], 1.0).unwrap_err();
        assert_eq!(err, SearchError::CoverageViolation { item: 1 });
    }

    #[test]
    fn classify() {
        let s = SearchScenario::new(4, [0, 1], vec![set(&[0, 2], 0.5), set(&[1, 3], 0.5)], 1.0)
            .unwrap();
        let r = s.classify_confidence().unwrap();
        assert_eq!(r.class, Confidence::Basic);
        assert_eq!(r.intersections, vec![1, 1]);

        let s = SearchScenario::new(3, [0], vec![set(&[0, 1], 0.5), set(&[2], 0.5)], 1.0).unwrap();
        let r = s.classify_confidence().unwrap();
        assert_eq!(r.class, Confidence::NotBasic);
        assert_eq!(r.intersections, vec![1, 0]);

        let s = SearchScenario::new(1, [0], vec![set(&[0], 1.0)], 1.0).unwrap();
        assert_eq!(s.classify_confidence().unwrap().class, Confidence::Basic);
    }

    #[test]
    fn strict_weight_sum() {
        let err =
            SearchScenario::new(4, [0], vec![set(&[0], 0.6), set(&[1], 0.5)], 1.0).unwrap_err();
        assert!(matches!(err, SearchError::WeightSum { .. }));
        // within 1e-12 is accepted
        SearchScenario::new(4, [0], vec![set(&[0], 0.5 + 4e-13), set(&[1], 0.5)], 1.0).unwrap();
    }

    #[test]
    fn raw_weights_are_rescaled() {
        let s = SearchScenario::with_raw_weights(4, [0], vec![set(&[0], 3.0), set(&[1], 1.0)], 1.0)
            .unwrap();
        assert!(s.weights_renormalized());
        assert!((s.info_sets()[0].weight() - 0.75).abs() < 1e-15);
        let s = SearchScenario::with_raw_weights(4, [0], vec![set(&[0], 0.5), set(&[1], 0.5)], 1.0)
            .unwrap();
        assert!(!s.weights_renormalized());
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = || vec![set(&[0], 1.0)];
        assert_eq!(
            SearchScenario::new(4, [], one(), 1.0).unwrap_err(),
            SearchError::EmptyTargets
        );
        assert!(matches!(
            SearchScenario::new(4, [4], one(), 1.0).unwrap_err(),
            SearchError::IndexOutOfRange { index: 4, .. }
        ));
        assert!(matches!(
            SearchScenario::with_raw_weights(4, [0], vec![set(&[0], 0.0)], 1.0).unwrap_err(),
            SearchError::BadWeight { .. }
        ));
        assert!(matches!(
            SearchScenario::with_raw_weights(4, [0], vec![set(&[0], 1.0), set(&[1], -1.0)], 1.0)
                .unwrap_err(),
            SearchError::BadWeight { set: 1, .. }
        ));
        assert_eq!(
            SearchScenario::new(4, [0], vec![set(&[0], 0.5), set(&[], 0.5)], 1.0).unwrap_err(),
            SearchError::EmptyInfoSet { set: 1 }
        );
        assert_eq!(
            SearchScenario::new(4, [0], one(), 0.0).unwrap_err(),
            SearchError::BadEnergy(0.0)
        );
        assert_eq!(
            SearchScenario::new(0, [0], one(), 1.0).unwrap_err(),
            SearchError::EmptyDatabase
        );
    }

    #[test]
    fn duplicate_members_collapse() {
        let s = set(&[1, 1, 2, 2, 2], 1.0);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn json_roundtrip_and_default_energy() {
        let text = r#"{"n_items": 8, "targets": [0, 1],
            "info_sets": [{"members": [0, 1, 2], "weight": 3}, {"members": [1, 3], "weight": 2}]}"#;
        let s = SearchScenario::from_json_str(text).unwrap();
        assert_eq!(s.energy(), 1.0);
        assert!(s.weights_renormalized());
        assert!((s.info_sets()[0].weight() - 0.6).abs() < 1e-15);
        let back =
            SearchScenario::from_json_str(&serde_json::to_string(&s.to_file()).unwrap()).unwrap();
        assert_eq!(back.targets(), s.targets());
        assert_eq!(back.info_sets(), s.info_sets());
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            SearchScenario::from_json_str("{ not json").unwrap_err(),
            SearchError::Parse(_)
        ));
        let uncovered =
            r#"{"n_items": 4, "targets": [3], "info_sets": [{"members": [0], "weight": 1}]}"#;
        assert_eq!(
            SearchScenario::from_json_str(uncovered).unwrap_err(),
            SearchError::CoverageViolation { item: 3 }
        );
    }
}
