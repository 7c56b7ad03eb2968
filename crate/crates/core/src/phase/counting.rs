//! Counting targets from the overlap estimate.
//!
//! With pairwise-disjoint sets and equal weights every supported item has
//! the same amplitude, so `y² = l / (l + R)` and `l` follows from `y_hat`.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::estimate::{estimate_on_device, PhaseEstimate, SearchDevice, VerificationConfig};
use super::qft::check_register_size;
use crate::error::{Result, SearchError};
use crate::scenario::{InformationSet, SearchScenario};
use crate::state_prep::weighted_superposition;

/// Default register size for estimation.
pub const DEFAULT_REGISTER_SIZE: usize = 64;

/// Keeps each item only in the lowest-index set that contains it and drops
/// sets left empty. Surviving weights are rescaled to sum to one.
pub fn disjointify(info_sets: &[InformationSet]) -> Vec<InformationSet> {
    let mut seen = std::collections::BTreeSet::new();
    let kept: Vec<InformationSet> = info_sets
        .iter()
        .filter_map(|set| {
            let members: Vec<usize> = set
                .members()
                .iter()
                .copied()
                .filter(|i| seen.insert(*i))
                .collect();
            (!members.is_empty()).then(|| InformationSet::new(members, set.weight()))
        })
        .collect();
    let total: f64 = kept.iter().map(InformationSet::weight).sum();
    if (total - 1.0).abs() <= crate::scenario::WEIGHT_SUM_TOL {
        return kept;
    }
    kept.into_iter()
        .map(|s| {
            let w = s.weight() / total;
            InformationSet::new(s.members().iter().copied(), w)
        })
        .collect()
}

/// Disjoint sets with uniform weights, ready for counting.
pub fn counting_scenario(scenario: &SearchScenario) -> Result<SearchScenario> {
    let sets = disjointify(scenario.info_sets());
    let w = 1.0 / sets.len() as f64;
    let sets = sets
        .into_iter()
        .map(|s| InformationSet::new(s.members().iter().copied(), w))
        .collect();
    SearchScenario::with_raw_weights(
        scenario.n_items(),
        scenario.targets().iter().copied(),
        sets,
        scenario.energy(),
    )
}

/// `round(y_hat² · (l+R))`, clamped to `[1, l+R]`.
pub fn estimate_count(y_hat: f64, support_size: usize) -> Result<usize> {
    if support_size < 1 {
        return Err(SearchError::EmptySupport);
    }
    let raw = (y_hat * y_hat * support_size as f64).round();
    Ok((raw.max(1.0) as usize).min(support_size))
}

/// Smallest admissible register: a power of two at least `4(l+R)`, and
/// never below the default of 64.
pub fn counting_register_size(support_size: usize) -> usize {
    (4 * support_size)
        .next_power_of_two()
        .max(DEFAULT_REGISTER_SIZE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingConfig {
    /// Register size; `None` picks [`counting_register_size`].
    pub m_size: Option<usize>,
    pub n_samples: usize,
    pub verification: VerificationConfig,
}

impl Default for CountingConfig {
    fn default() -> Self {
        Self {
            m_size: None,
            n_samples: 50,
            verification: VerificationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub support_size: usize,
    pub m_size: usize,
    pub disjoint_sets: Vec<Vec<usize>>,
    pub estimate: PhaseEstimate,
    pub l_hat: usize,
    pub oracle_queries: u64,
}

/// Disjointify, estimate `y` on the device, convert to a count.
///
/// Only the oracle and device outcomes are consulted; the target set is
/// never read on this path.
pub fn run_counting<R: RngCore + ?Sized>(
    scenario: &SearchScenario,
    config: CountingConfig,
    rng: &mut R,
) -> Result<CountReport> {
    let counting = counting_scenario(scenario)?;
    let support_size = counting.support_size();
    let required = 4 * support_size;
    let m_size = match config.m_size {
        Some(m) => {
            check_register_size(m)?;
            if m < required {
                return Err(SearchError::RegisterTooCoarse { m, required });
            }
            m
        }
        None => counting_register_size(support_size),
    };
    let prep = weighted_superposition(&counting)?;
    let device = SearchDevice::new(&prep, counting.energy())?;
    let oracle = counting.oracle();
    let estimate = estimate_on_device(
        &device,
        &oracle,
        m_size,
        config.n_samples,
        config.verification,
        rng,
    )?;
    let l_hat = estimate_count(estimate.y_hat, support_size)?;
    Ok(CountReport {
        support_size,
        m_size,
        disjoint_sets: counting
            .info_sets()
            .iter()
            .map(|s| s.members().iter().copied().collect())
            .collect(),
        estimate,
        l_hat,
        oracle_queries: oracle.queries(),
    })
}
