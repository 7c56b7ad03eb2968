//! Recovering `y` from register outcomes.
//!
//! A register outcome `k` only fixes the unordered pair `{k/M, 1 - k/M}`:
//! the `ỹ` branch peaks at `k ≈ My` and the `1-y` branch, which is the more
//! likely one with weight `(1+y)/2`, peaks at the mirror `M - k`. Samples
//! are therefore pooled by the representative `min(k, M - k)`, and the
//! side that was seen less often is taken to be `y`. When the two sides
//! are too close to call, each candidate is tried on the device and the
//! oracle decides.

use std::collections::BTreeMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::reduced::{self, distribution_from_state};
use crate::rng::CdfSampler;
use crate::scenario::Oracle;
use crate::state_prep::StatePrep;

/// How `y_hat` was picked out of the candidate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disambiguation {
    /// The two candidates coincide (`k ∈ {0, M/2}`).
    Symmetric,
    /// The lighter side of the modal pair was taken as `y`.
    BranchWeight,
    /// Sides were indistinguishable; a verification run is required.
    Pending,
    /// Resolved by verification evolutions checked with the oracle.
    Verified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub m_size: usize,
    /// Representative `min(k, M-k)` of the modal pair.
    pub k_mode: usize,
    pub y_candidates: [f64; 2],
    pub y_hat: f64,
    pub resolution: f64,
    pub samples_used: usize,
    /// Samples equal to `k_mode`.
    pub low_side_count: usize,
    /// Samples equal to `M - k_mode`.
    pub high_side_count: usize,
    pub disambiguation: Disambiguation,
    /// Raw outcome counts keyed by `k`.
    pub k_histogram: BTreeMap<usize, usize>,
    /// Oracle hits per candidate, filled in by verification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification_hits: Option<[usize; 2]>,
}

impl PhaseEstimate {
    pub fn needs_verification(&self) -> bool {
        self.disambiguation == Disambiguation::Pending
    }
}

/// Pools samples by pair and applies the branch-weight rule.
///
/// The sides are called when `|low - high| / n >= 2 / sqrt(n)`, with `n`
/// the total number of samples. Otherwise `y_hat` holds the lighter-side
/// guess and the estimate is marked [`Disambiguation::Pending`].
pub fn estimate_y(samples: &[usize], m_size: usize) -> Result<PhaseEstimate> {
    if samples.is_empty() {
        return Err(SearchError::NoSamples);
    }
    super::qft::check_register_size(m_size)?;
    if let Some(&bad) = samples.iter().find(|&&k| k >= m_size) {
        return Err(SearchError::IndexOutOfRange {
            index: bad,
            n_items: m_size,
        });
    }
    let mut k_histogram = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for &k in samples {
        *k_histogram.entry(k).or_insert(0usize) += 1;
        *pairs.entry(k.min(m_size - k)).or_insert(0usize) += 1;
    }
    // ties go to the smaller representative
    let (&k_mode, _) = pairs
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .expect("nonempty");

    let m = m_size as f64;
    let low = k_mode as f64 / m;
    let high = 1.0 - low;
    let low_side_count = k_histogram.get(&k_mode).copied().unwrap_or(0);
    let high_side_count = if k_mode == 0 || 2 * k_mode == m_size {
        low_side_count
    } else {
        k_histogram.get(&(m_size - k_mode)).copied().unwrap_or(0)
    };

    let n = samples.len() as f64;
    let (y_hat, disambiguation) = if k_mode == 0 {
        // y = 1 puts both branches on k = 0; y itself is never 0
        (1.0, Disambiguation::Symmetric)
    } else if 2 * k_mode == m_size {
        (0.5, Disambiguation::Symmetric)
    } else {
        let lighter = if low_side_count < high_side_count {
            low
        } else {
            high
        };
        let gap = (low_side_count as f64 - high_side_count as f64).abs() / n;
        let decided = low_side_count > 0 && high_side_count > 0 && gap >= 2.0 / n.sqrt();
        let how = if decided {
            Disambiguation::BranchWeight
        } else {
            Disambiguation::Pending
        };
        (lighter, how)
    };

    Ok(PhaseEstimate {
        m_size,
        k_mode,
        y_candidates: [low, high],
        y_hat,
        resolution: 1.0 / m,
        samples_used: samples.len(),
        low_side_count,
        high_side_count,
        disambiguation,
        k_histogram,
        verification_hits: None,
    })
}

/// Simulated hardware: the prepared state, the walk, the register and
/// measurement in the item basis. The overlap `y` stays inside; callers
/// only see sampled outcomes.
#[derive(Debug, Clone)]
pub struct SearchDevice<'a> {
    prep: &'a StatePrep,
    energy: f64,
}

impl<'a> SearchDevice<'a> {
    pub fn new(prep: &'a StatePrep, energy: f64) -> Result<Self> {
        reduced::check_energy(energy)?;
        Ok(Self { prep, energy })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn n_items(&self) -> usize {
        self.prep.n_items()
    }

    /// Runs phase estimation `n_samples` times and returns the register
    /// outcomes.
    pub fn sample_phase_register<R: RngCore + ?Sized>(
        &self,
        m_size: usize,
        n_samples: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        super::distribution::sample_phase_register(self.prep.y, m_size, n_samples, rng)
    }

    /// Evolves `|s⟩` for time `t`, measures, returns the observed item.
    pub fn measure_at<R: RngCore + ?Sized>(&self, t: f64, rng: &mut R) -> Result<usize> {
        let state = reduced::evolve_state(self.prep, self.energy, t)?;
        distribution_from_state(self.prep, &state, t).sample(rng)
    }

    /// `shots` measurements at time `t`.
    pub fn measure_many<R: RngCore + ?Sized>(
        &self,
        t: f64,
        shots: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        let state = reduced::evolve_state(self.prep, self.energy, t)?;
        let dist = distribution_from_state(self.prep, &state, t);
        let sampler = CdfSampler::new(&dist.item_probs)?;
        Ok((0..shots).map(|_| sampler.sample(rng)).collect())
    }
}

/// Verification schedule: for a candidate `c`, measure `shots` times at
/// each of `(2j+1)·π/(2Ec)` for `j = 0..odd_multiples`. The right
/// candidate lands in the target subspace at every one of these times;
/// later odd multiples magnify the timing error of a wrong one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationConfig {
    pub shots: usize,
    pub odd_multiples: usize,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        Self {
            shots: 16,
            odd_multiples: 4,
        }
    }
}

/// Oracle hits collected for candidate overlap `candidate`.
pub fn verification_hits<R: RngCore + ?Sized>(
    candidate: f64,
    device: &SearchDevice<'_>,
    oracle: &Oracle<'_>,
    config: VerificationConfig,
    rng: &mut R,
) -> Result<usize> {
    if !(candidate > 0.0 && candidate <= 1.0) {
        return Ok(0);
    }
    let base = reduced::optimal_time(candidate, device.energy())?;
    let mut hits = 0;
    for j in 0..config.odd_multiples {
        let t = (2 * j + 1) as f64 * base;
        for item in device.measure_many(t, config.shots, rng)? {
            if oracle.eval(item)? {
                hits += 1;
            }
        }
    }
    Ok(hits)
}

/// Settles a pending estimate by trying both candidates on the device.
/// The candidate with more oracle hits wins; an exact tie keeps the
/// branch-weight guess. Estimates that are already decided pass through.
pub fn resolve_with_verification<R: RngCore + ?Sized>(
    mut estimate: PhaseEstimate,
    device: &SearchDevice<'_>,
    oracle: &Oracle<'_>,
    config: VerificationConfig,
    rng: &mut R,
) -> Result<PhaseEstimate> {
    if !estimate.needs_verification() {
        return Ok(estimate);
    }
    let [low, high] = estimate.y_candidates;
    let hits_low = verification_hits(low, device, oracle, config, rng)?;
    let hits_high = verification_hits(high, device, oracle, config, rng)?;
    estimate.y_hat = match hits_low.cmp(&hits_high) {
        std::cmp::Ordering::Greater => low,
        std::cmp::Ordering::Less => high,
        std::cmp::Ordering::Equal => estimate.y_hat,
    };
    estimate.verification_hits = Some([hits_low, hits_high]);
    estimate.disambiguation = Disambiguation::Verified;
    Ok(estimate)
}

/// Full estimation run: sample the register, pool, verify if needed.
pub fn estimate_on_device<R: RngCore + ?Sized>(
    device: &SearchDevice<'_>,
    oracle: &Oracle<'_>,
    m_size: usize,
    n_samples: usize,
    config: VerificationConfig,
    rng: &mut R,
) -> Result<PhaseEstimate> {
    let samples = device.sample_phase_register(m_size, n_samples, rng)?;
    let estimate = estimate_y(&samples, m_size)?;
    resolve_with_verification(estimate, device, oracle, config, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::distribution::circle_distance;
    use crate::rng::stream;
    use crate::scenario::{InformationSet, SearchScenario};
    use crate::state_prep::weighted_superposition;

    #[test]
    fn single_cluster_needs_verification() {
        let e = estimate_y(&[2, 2, 2, 2], 8).unwrap();
        assert_eq!(e.k_mode, 2);
        assert_eq!(e.y_candidates, [0.25, 0.75]);
        assert_eq!(e.disambiguation, Disambiguation::Pending);

        // ground truth y = 1/4: one target in a uniform set of 16
        let s = SearchScenario::new(16, [0], vec![InformationSet::new(0..16, 1.0)], 1.0).unwrap();
        let p = weighted_superposition(&s).unwrap();
        assert!((p.y - 0.25).abs() < 1e-12);
        let dev = SearchDevice::new(&p, 1.0).unwrap();
        let oracle = s.oracle();
        let r = resolve_with_verification(
            e,
            &dev,
            &oracle,
            VerificationConfig::default(),
            &mut stream(0, "v"),
        )
        .unwrap();
        assert_eq!(r.y_hat, 0.25);
        assert_eq!(r.disambiguation, Disambiguation::Verified);
        assert!(oracle.queries() > 0);
    }

    #[test]
    fn symmetric_point() {
        let e = estimate_y(&[4, 4, 4], 8).unwrap();
        assert_eq!(e.y_hat, 0.5);
        assert_eq!(e.disambiguation, Disambiguation::Symmetric);
        let e = estimate_y(&[0, 0], 8).unwrap();
        assert_eq!(e.y_hat, 1.0);
    }

    #[test]
    fn branch_weight_rule() {
        // 70 on k = 6 (the 1-y side), 30 on k = 2
        let mut s = vec![6; 70];
        s.extend(vec![2; 30]);
        let e = estimate_y(&s, 8).unwrap();
        assert_eq!(e.disambiguation, Disambiguation::BranchWeight);
        assert_eq!(e.y_hat, 0.25);
        // mirrored: y above one half
        let mut s = vec![2; 70];
        s.extend(vec![6; 30]);
        assert_eq!(estimate_y(&s, 8).unwrap().y_hat, 0.75);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(estimate_y(&[], 8).unwrap_err(), SearchError::NoSamples);
        assert!(estimate_y(&[9], 8).is_err());
    }

    #[test]
    fn seeded_estimate_within_resolution() {
        let y = std::f64::consts::FRAC_1_SQRT_2;
        let samples = super::super::distribution::sample_phase_register(
            y,
            64,
            200,
            &mut stream(7, "estimate"),
        )
        .unwrap();
        let e = estimate_y(&samples, 64).unwrap();
        assert_eq!(e.disambiguation, Disambiguation::BranchWeight);
        assert!(circle_distance(e.y_hat, y) <= 1.0 / 64.0, "{e:?}");
    }
}
