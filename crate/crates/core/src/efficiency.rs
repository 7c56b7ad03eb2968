//! Runtime bounds and scenario classes.
//!
//! Everything here is closed-form except [`first_residual_zero`], which
//! locates the measurement time from the simulated trajectory so it can be
//! compared with the formula.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::reduced::{self, check_energy};
use crate::rng::{self, uniform01, uniform_int};
use crate::scenario::{Confidence, InformationSet, SearchScenario};
use crate::state_prep::{weighted_superposition, StatePrep};

/// Slack on time upper bounds.
pub const TIME_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    BasicConf,
    Disjoint,
    UnstructuredBaseline,
}

/// Lower bound on `y` and the matching upper bound on `T = π/(2Ey)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeBound {
    pub y_lower: f64,
    pub t_upper: f64,
}

/// `T` checked against one bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub scenario_id: String,
    pub y: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub bound_value: f64,
    pub bound_kind: BoundKind,
    pub satisfied: bool,
    /// `bound_value - T`; nonnegative when satisfied.
    pub margin: f64,
}

impl BoundReport {
    fn time_upper(id: &str, y: f64, t: f64, bound: f64, kind: BoundKind) -> Self {
        Self {
            scenario_id: id.to_string(),
            y,
            t,
            bound_value: bound,
            bound_kind: kind,
            satisfied: t <= bound + TIME_BOUND_TOL,
            margin: bound - t,
        }
    }
}

/// With basic confidence: `y >= 1/sqrt(n(l+R))`, `T <= (π sqrt(n)/(2E)) sqrt(l+R)`.
pub fn basic_confidence_bound(
    n_sets: usize,
    support_size: usize,
    energy: f64,
) -> Result<TimeBound> {
    if n_sets == 0 {
        return Err(SearchError::NoInfoSets);
    }
    if support_size == 0 {
        return Err(SearchError::EmptySupport);
    }
    check_energy(energy)?;
    let (n, s) = (n_sets as f64, support_size as f64);
    Ok(TimeBound {
        y_lower: 1.0 / (n * s).sqrt(),
        t_upper: std::f64::consts::PI * n.sqrt() / (2.0 * energy) * s.sqrt(),
    })
}

/// Pairwise-disjoint sets with basic confidence: `y >= 1/sqrt(l+R)`,
/// `T <= (π/(2E)) sqrt(l+R)`, independent of the number of sets.
pub fn disjoint_bound(support_size: usize, energy: f64) -> Result<TimeBound> {
    basic_confidence_bound(1, support_size, energy)
}

/// One point of the misplaced-confidence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisplacedPoint {
    pub alpha2: f64,
    pub nu: f64,
    pub y: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

/// Shape of the two-set counterexample: `T ⊆ A1`, `T ∩ A2 = ∅`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisplacedShape {
    pub l: usize,
    pub n1: usize,
    pub n2: usize,
    pub n12: usize,
}

impl MisplacedShape {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(SearchError::BadStructure(msg.to_string()));
        if self.l == 0 {
            return bad("l must be positive");
        }
        if self.n2 == 0 {
            return bad("A2 must be nonempty");
        }
        if self.n12 > self.n2 || self.n12 > self.n1 {
            return bad("n12 exceeds a set size");
        }
        if self.l + self.n12 > self.n1 {
            return bad("targets must lie in A1 outside A2");
        }
        Ok(())
    }

    /// `ν` for weights `(1 - α2, α2)`.
    pub fn nu(&self, alpha2: f64) -> f64 {
        let a1 = 1.0 - alpha2;
        let only1 = (self.n1 - self.n12) as f64;
        let both = self.n12 as f64;
        let only2 = (self.n2 - self.n12) as f64;
        (only1 * a1 * a1 + both + only2 * alpha2 * alpha2).sqrt()
    }

    /// Concrete scenario: targets `0..l`, `A1 = 0..n1`, `A2` the `n2`
    /// items starting at `n1 - n12`.
    pub fn scenario(&self, alpha2: f64, energy: f64) -> Result<SearchScenario> {
        self.validate()?;
        check_grid_value(alpha2)?;
        let start2 = self.n1 - self.n12;
        let n_items = start2 + self.n2;
        SearchScenario::with_raw_weights(
            n_items,
            0..self.l,
            vec![
                InformationSet::new(0..self.n1, 1.0 - alpha2),
                InformationSet::new(start2..start2 + self.n2, alpha2),
            ],
            energy,
        )
    }
}

fn check_grid_value(alpha2: f64) -> Result<()> {
    if alpha2 > 0.0 && alpha2 < 1.0 {
        Ok(())
    } else {
        Err(SearchError::GridOutOfRange(alpha2))
    }
}

/// `ν`, `y = sqrt(l)(1-α2)/ν` and `T = π/(2Ey)` along `alpha2_grid`.
pub fn misplaced_confidence_curve(
    shape: MisplacedShape,
    alpha2_grid: &[f64],
    energy: f64,
) -> Result<Vec<MisplacedPoint>> {
    shape.validate()?;
    check_energy(energy)?;
    alpha2_grid
        .iter()
        .map(|&alpha2| {
            check_grid_value(alpha2)?;
            let nu = shape.nu(alpha2);
            let y = (shape.l as f64).sqrt() * (1.0 - alpha2) / nu;
            Ok(MisplacedPoint {
                alpha2,
                nu,
                y,
                t: std::f64::consts::PI / (2.0 * energy * y),
            })
        })
        .collect()
}

/// First `t > 0` at which the `|r⟩` component of the simulated state
/// vanishes.
///
/// Scans `Im(conj(a) b)`, which is invariant under the global phase and
/// changes sign exactly there, with step `step`, then bisects.
pub fn first_residual_zero(prep: &StatePrep, energy: f64, step: f64, t_max: f64) -> Result<f64> {
    let signal = |t: f64| -> Result<f64> {
        let s = reduced::evolve_state(prep, energy, t)?;
        Ok((s.a.conj() * s.b).im)
    };
    let mut lo = step;
    let mut f_lo = signal(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    loop {
        let hi = lo + step;
        if hi > t_max {
            return Err(SearchError::BadTime(t_max));
        }
        let f_hi = signal(hi)?;
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = signal(mid)?;
                if fm == 0.0 {
                    return Ok(mid);
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Ok(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
}

/// Weighted versus uniform initial state on the same database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n_items: usize,
    pub n_targets: usize,
    pub n_sets: usize,
    pub support_size: usize,
    pub y_structured: f64,
    pub y_unstructured: f64,
    pub t_structured: f64,
    pub t_unstructured: f64,
    /// `T_unstructured / T_structured`; above one means the weighted start
    /// is faster.
    pub speedup: f64,
    /// `T_structured / T_unstructured`.
    pub time_ratio: f64,
    pub confidence: Confidence,
    pub intersections: Vec<usize>,
    pub pairwise_disjoint: bool,
    /// `ln(l+R) / ln N`, reported only.
    pub support_exponent: f64,
    /// Expected classical queries `N/(l+1)`, formula only.
    pub classical_queries: f64,
    pub bounds: Vec<BoundReport>,
}

pub fn compare_structured_unstructured(scenario: &SearchScenario) -> Result<Comparison> {
    compare_with_id(scenario, "scenario")
}

pub fn compare_with_id(scenario: &SearchScenario, id: &str) -> Result<Comparison> {
    let prep = weighted_superposition(scenario)?;
    let e = scenario.energy();
    let n = scenario.n_items();
    let l = scenario.n_targets();
    let y_u = (l as f64 / n as f64).sqrt();
    let t_s = reduced::optimal_time(prep.y, e)?;
    let t_u = reduced::optimal_time(y_u, e)?;
    let report = scenario.classify_confidence()?;
    let support = prep.support_size();
    let bounds = scenario_bounds(id, scenario, &prep)?;
    Ok(Comparison {
        n_items: n,
        n_targets: l,
        n_sets: scenario.info_sets().len(),
        support_size: support,
        y_structured: prep.y,
        y_unstructured: y_u,
        t_structured: t_s,
        t_unstructured: t_u,
        speedup: t_u / t_s,
        time_ratio: t_s / t_u,
        confidence: report.class,
        intersections: report.intersections,
        pairwise_disjoint: scenario.is_pairwise_disjoint(),
        support_exponent: if n > 1 {
            (support as f64).ln() / (n as f64).ln()
        } else {
            0.0
        },
        classical_queries: n as f64 / (l as f64 + 1.0),
        bounds,
    })
}

/// Bounds that apply to `scenario`: the basic-confidence bound when every
/// set meets the targets, the disjoint bound when additionally the sets
/// are disjoint, and always the comparison against the uniform start.
pub fn scenario_bounds(
    id: &str,
    scenario: &SearchScenario,
    prep: &StatePrep,
) -> Result<Vec<BoundReport>> {
    let e = scenario.energy();
    let t = reduced::optimal_time(prep.y, e)?;
    let support = prep.support_size();
    let mut out = Vec::new();
    if scenario.classify_confidence()?.class == Confidence::Basic {
        let b = basic_confidence_bound(scenario.info_sets().len(), support, e)?;
        out.push(BoundReport::time_upper(
            id,
            prep.y,
            t,
            b.t_upper,
            BoundKind::BasicConf,
        ));
        if scenario.is_pairwise_disjoint() {
            let b = disjoint_bound(support, e)?;
            out.push(BoundReport::time_upper(
                id,
                prep.y,
                t,
                b.t_upper,
                BoundKind::Disjoint,
            ));
        }
    }
    let y_u = (scenario.n_targets() as f64 / scenario.n_items() as f64).sqrt();
    let t_u = reduced::optimal_time(y_u, e)?;
    out.push(BoundReport::time_upper(
        id,
        prep.y,
        t,
        t_u,
        BoundKind::UnstructuredBaseline,
    ));
    Ok(out)
}

/// Normalization-constant bounds for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuBounds {
    pub nu_sq: f64,
    /// `Σ_j k_j α_j²`.
    pub lower: f64,
    /// `l + R`.
    pub upper: f64,
    pub sum_alpha_sq: f64,
    /// `(l+R) Σ α_j²`, valid for disjoint sets.
    pub disjoint_upper: f64,
    pub holds: bool,
    /// `Σ α_j² >= 1/n`.
    pub alpha_sq_holds: bool,
    /// Present only for disjoint scenarios.
    pub disjoint_holds: Option<bool>,
}

pub fn nu_bounds(scenario: &SearchScenario, prep: &StatePrep) -> NuBounds {
    let sets = scenario.info_sets();
    let nu_sq = prep.nu * prep.nu;
    let lower: f64 = sets
        .iter()
        .map(|s| s.len() as f64 * s.weight() * s.weight())
        .sum();
    let sum_alpha_sq: f64 = sets.iter().map(|s| s.weight() * s.weight()).sum();
    let upper = prep.support_size() as f64;
    let disjoint_upper = upper * sum_alpha_sq;
    let tol = 1e-12 * upper.max(1.0);
    NuBounds {
        nu_sq,
        lower,
        upper,
        sum_alpha_sq,
        disjoint_upper,
        holds: lower <= nu_sq + tol && nu_sq <= upper + tol,
        alpha_sq_holds: sum_alpha_sq >= 1.0 / sets.len() as f64 - 1e-15,
        disjoint_holds: scenario
            .is_pairwise_disjoint()
            .then_some(nu_sq <= disjoint_upper + tol),
    }
}

/// Structural family for [`random_scenario_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SuiteMode {
    Basic,
    Disjoint,
    Misplaced,
}

impl SuiteMode {
    fn tag(self) -> &'static str {
        match self {
            SuiteMode::Basic => "suite/basic",
            SuiteMode::Disjoint => "suite/disjoint",
            SuiteMode::Misplaced => "suite/misplaced",
        }
    }
}

/// Generator ranges; all bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub n_items: (usize, usize),
    pub n_sets: (usize, usize),
    /// Cap on `l + R`; `None` leaves it to the other ranges.
    pub max_support: Option<usize>,
    /// Range of `α2` for the misplaced family.
    pub alpha2: (f64, f64),
    /// Equal weights instead of random ones.
    pub uniform_weights: bool,
    pub energy: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            n_items: (8, 256),
            n_sets: (1, 6),
            max_support: None,
            alpha2: (0.5, 0.99),
            uniform_weights: false,
            energy: 1.0,
        }
    }
}

/// Deterministic batch of scenarios of one family, with default ranges.
pub fn random_scenario_suite(
    seed: u64,
    count: usize,
    mode: SuiteMode,
) -> Result<Vec<SearchScenario>> {
    random_scenario_suite_with(seed, count, mode, &SuiteParams::default())
}

pub fn random_scenario_suite_with(
    seed: u64,
    count: usize,
    mode: SuiteMode,
    params: &SuiteParams,
) -> Result<Vec<SearchScenario>> {
    if count == 0 {
        return Err(SearchError::Infeasible("count must be at least 1".into()));
    }
    validate_params(mode, params)?;
    let mut rng = rng::stream(seed, mode.tag());
    (0..count)
        .map(|_| match mode {
            SuiteMode::Basic => gen_basic(&mut rng, params),
            SuiteMode::Disjoint => gen_disjoint(&mut rng, params),
            SuiteMode::Misplaced => gen_misplaced(&mut rng, params),
        })
        .collect()
}

fn validate_params(mode: SuiteMode, p: &SuiteParams) -> Result<()> {
    let bad = |m: String| Err(SearchError::Infeasible(m));
    if p.n_items.0 == 0 || p.n_items.0 > p.n_items.1 {
        return bad(format!("bad item range {:?}", p.n_items));
    }
    if p.n_sets.0 == 0 || p.n_sets.0 > p.n_sets.1 {
        return bad(format!("bad set-count range {:?}", p.n_sets));
    }
    let support_cap = p.max_support.unwrap_or(usize::MAX).min(p.n_items.0);
    match mode {
        // every set needs its own target
        SuiteMode::Disjoint if p.n_sets.0 > support_cap => bad(format!(
            "{} disjoint sets cannot fit in {} items",
            p.n_sets.0, support_cap
        )),
        SuiteMode::Misplaced if support_cap < 2 => bad("misplaced family needs two items".into()),
        SuiteMode::Misplaced
            if !(p.alpha2.0 > 0.0 && p.alpha2.1 < 1.0 && p.alpha2.0 <= p.alpha2.1) =>
        {
            bad(format!("bad alpha2 range {:?}", p.alpha2))
        }
        _ => Ok(()),
    }
}

/// `k` distinct items from `0..n` in random order.
fn choose_distinct<R: RngCore>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = uniform_int(rng, i, n - 1);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

fn random_weights<R: RngCore>(rng: &mut R, n: usize, uniform: bool) -> Vec<f64> {
    if uniform {
        return vec![1.0 / n as f64; n];
    }
    // uniform on (0.05, 1], then normalized
    let raw: Vec<f64> = (0..n)
        .map(|_| 0.05 + 0.95 * (1.0 - uniform01(rng)))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn gen_basic<R: RngCore>(rng: &mut R, p: &SuiteParams) -> Result<SearchScenario> {
    let n_items = uniform_int(rng, p.n_items.0, p.n_items.1);
    let cap = p.max_support.unwrap_or(n_items).min(n_items);
    let n_sets = uniform_int(rng, p.n_sets.0, p.n_sets.1);
    let l = uniform_int(rng, 1, (cap / 4).clamp(1, 8));
    let support = uniform_int(rng, l.max(2).min(cap), cap.min(l + 24));
    let items = choose_distinct(rng, n_items, support);
    let (targets, others) = items.split_at(l);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_sets];
    // every set meets T and every target is covered
    for (j, set) in members.iter_mut().enumerate() {
        set.push(targets[j % l]);
    }
    for (i, &t) in targets.iter().enumerate() {
        members[i % n_sets].push(t);
    }
    for &o in others {
        let j = uniform_int(rng, 0, n_sets - 1);
        members[j].push(o);
    }
    // random extra overlap
    for set in members.iter_mut() {
        let extra = uniform_int(rng, 0, 4);
        for _ in 0..extra {
            set.push(items[uniform_int(rng, 0, support - 1)]);
        }
    }
    build(rng, n_items, targets, members, p)
}

fn gen_disjoint<R: RngCore>(rng: &mut R, p: &SuiteParams) -> Result<SearchScenario> {
    let n_items = uniform_int(rng, p.n_items.0, p.n_items.1);
    let cap = p.max_support.unwrap_or(n_items).min(n_items);
    let n_sets = uniform_int(rng, p.n_sets.0, p.n_sets.1.min(cap));
    let support = uniform_int(rng, n_sets, cap.min(n_sets + 30));
    let l = uniform_int(rng, n_sets, support);
    let items = choose_distinct(rng, n_items, support);
    let (targets, others) = items.split_at(l);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_sets];
    for (i, &t) in targets.iter().enumerate() {
        let j = if i < n_sets {
            i
        } else {
            uniform_int(rng, 0, n_sets - 1)
        };
        members[j].push(t);
    }
    for &o in others {
        let j = uniform_int(rng, 0, n_sets - 1);
        members[j].push(o);
    }
    build(rng, n_items, targets, members, p)
}

fn gen_misplaced<R: RngCore>(rng: &mut R, p: &SuiteParams) -> Result<SearchScenario> {
    let n_items = uniform_int(rng, p.n_items.0, p.n_items.1);
    let cap = p.max_support.unwrap_or(n_items).min(n_items);
    let l = uniform_int(rng, 1, (cap / 4).clamp(1, 6));
    let n1 = uniform_int(rng, l, (l + 8).min(cap - 1));
    let n12 = uniform_int(rng, 0, (n1 - l).min(3));
    let n2 = uniform_int(rng, n12.max(1), (n12 + 8).min(cap - n1 + n12));
    let alpha2 = p.alpha2.0 + (p.alpha2.1 - p.alpha2.0) * uniform01(rng);
    let shape = MisplacedShape { l, n1, n2, n12 };
    // relabel the canonical layout onto random items
    let base = shape.scenario(alpha2, p.energy)?;
    let labels = choose_distinct(rng, n_items, base.n_items());
    let sets = base
        .info_sets()
        .iter()
        .map(|s| InformationSet::new(s.members().iter().map(|&i| labels[i]), s.weight()))
        .collect();
    SearchScenario::with_raw_weights(
        n_items,
        base.targets().iter().map(|&t| labels[t]),
        sets,
        p.energy,
    )
}

fn build<R: RngCore>(
    rng: &mut R,
    n_items: usize,
    targets: &[usize],
    members: Vec<Vec<usize>>,
    p: &SuiteParams,
) -> Result<SearchScenario> {
    let weights = random_weights(rng, members.len(), p.uniform_weights);
    let sets = members
        .into_iter()
        .zip(weights)
        .map(|(m, w)| InformationSet::new(m, w))
        .collect();
    SearchScenario::with_raw_weights(n_items, targets.iter().copied(), sets, p.energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basic_bound_values() {
        let b = basic_confidence_bound(1, 1, 1.0).unwrap();
        assert_eq!(b.y_lower, 1.0);
        assert!((b.t_upper - PI / 2.0).abs() < 1e-15);
        let b = basic_confidence_bound(2, 4, 1.0).unwrap();
        assert!((b.y_lower - 0.35355).abs() < 1e-5);
        assert!((b.t_upper - 4.4429).abs() < 1e-4);
        let b = basic_confidence_bound(4, 100, 1.0).unwrap();
        assert!((b.t_upper - 10.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn disjoint_bound_values() {
        assert!((disjoint_bound(1, 2.0).unwrap().t_upper - PI / 4.0).abs() < 1e-15);
        let b = disjoint_bound(6, 1.0).unwrap();
        assert!((b.t_upper - 3.8476).abs() < 1e-4);
        let t = reduced::optimal_time(0.5f64.sqrt(), 1.0).unwrap();
        assert!((t - 2.2214).abs() < 1e-4);
        assert!(t <= b.t_upper);
        let ratio = basic_confidence_bound(9, 6, 1.0).unwrap().t_upper / b.t_upper;
        assert!((ratio - 3.0).abs() < 1e-12);
    }

    #[test]
    fn misplaced_point() {
        let shape = MisplacedShape {
            l: 1,
            n1: 2,
            n2: 1,
            n12: 0,
        };
        let pts = misplaced_confidence_curve(shape, &[0.8], 1.0).unwrap();
        assert!((pts[0].nu - 0.72f64.sqrt()).abs() < 1e-14);
        assert!((pts[0].y - 0.235702).abs() < 1e-6);
        assert!((pts[0].t - 6.6643).abs() < 1e-4);
        // small alpha2 approaches the A1-only overlap sqrt(l/n1)
        let pts = misplaced_confidence_curve(shape, &[1e-9], 1.0).unwrap();
        assert!((pts[0].y - 0.5f64.sqrt()).abs() < 1e-8);
        assert!(misplaced_confidence_curve(shape, &[1.0], 1.0).is_err());
        assert!(misplaced_confidence_curve(shape, &[0.0], 1.0).is_err());
    }

    #[test]
    fn misplaced_shape_matches_state_prep() {
        let shape = MisplacedShape {
            l: 2,
            n1: 5,
            n2: 4,
            n12: 2,
        };
        for &a in &[0.1, 0.5, 0.9] {
            let s = shape.scenario(a, 1.0).unwrap();
            let prep = weighted_superposition(&s).unwrap();
            let pt = misplaced_confidence_curve(shape, &[a], 1.0).unwrap()[0];
            assert!((prep.nu - pt.nu).abs() < 1e-13);
            assert!((prep.y - pt.y).abs() < 1e-13);
            assert_eq!(s.classify_confidence().unwrap().class, Confidence::NotBasic);
        }
        assert!(MisplacedShape {
            l: 3,
            n1: 3,
            n2: 2,
            n12: 1
        }
        .validate()
        .is_err());
    }

    #[test]
    fn residual_zero_matches_formula() {
        let shape = MisplacedShape {
            l: 1,
            n1: 2,
            n2: 1,
            n12: 0,
        };
        let s = shape.scenario(0.8, 1.0).unwrap();
        let prep = weighted_superposition(&s).unwrap();
        let t = first_residual_zero(&prep, 1.0, 0.01, 1e4).unwrap();
        let formula = misplaced_confidence_curve(shape, &[0.8], 1.0).unwrap()[0].t;
        assert!((t - formula).abs() < 1e-6, "{t} vs {formula}");
    }

    #[test]
    fn comparison_examples() {
        let s = SearchScenario::new(1024, [5], vec![InformationSet::new([5], 1.0)], 1.0).unwrap();
        let c = compare_structured_unstructured(&s).unwrap();
        assert!((c.speedup - 32.0).abs() < 1e-12);

        let s = SearchScenario::new(
            8,
            [0, 1],
            vec![
                InformationSet::new([0, 1, 2], 0.6),
                InformationSet::new([1, 3], 0.4),
            ],
            1.0,
        )
        .unwrap();
        let c = compare_structured_unstructured(&s).unwrap();
        assert!((c.time_ratio - 0.5879).abs() < 1e-4);
        assert!((c.time_ratio - 0.25f64.sqrt() / c.y_structured).abs() < 1e-12);

        let s = MisplacedShape {
            l: 1,
            n1: 2,
            n2: 1,
            n12: 0,
        }
        .scenario(0.95, 1.0)
        .unwrap();
        let c = compare_structured_unstructured(&s).unwrap();
        assert!(c.time_ratio > 1.0);
        assert_eq!(c.confidence, Confidence::NotBasic);
    }

    #[test]
    fn suites_have_their_structure() {
        for s in random_scenario_suite(1, 100, SuiteMode::Basic).unwrap() {
            assert_eq!(s.classify_confidence().unwrap().class, Confidence::Basic);
        }
        for s in random_scenario_suite(1, 100, SuiteMode::Disjoint).unwrap() {
            assert!(s.is_pairwise_disjoint());
            assert_eq!(s.classify_confidence().unwrap().class, Confidence::Basic);
        }
        for s in random_scenario_suite(1, 100, SuiteMode::Misplaced).unwrap() {
            assert_eq!(s.classify_confidence().unwrap().class, Confidence::NotBasic);
        }
        let a = random_scenario_suite(3, 5, SuiteMode::Basic).unwrap();
        let b = random_scenario_suite(3, 5, SuiteMode::Basic).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_params() {
        let p = SuiteParams {
            n_items: (4, 4),
            n_sets: (6, 6),
            ..SuiteParams::default()
        };
        assert!(matches!(
            random_scenario_suite_with(0, 1, SuiteMode::Disjoint, &p),
            Err(SearchError::Infeasible(_))
        ));
        assert!(random_scenario_suite(0, 0, SuiteMode::Basic).is_err());
    }

    #[test]
    fn nu_bounds_example() {
        let s = SearchScenario::new(
            8,
            [0, 1],
            vec![
                InformationSet::new([0, 1, 2], 0.6),
                InformationSet::new([1, 3], 0.4),
            ],
            1.0,
        )
        .unwrap();
        let p = weighted_superposition(&s).unwrap();
        let b = nu_bounds(&s, &p);
        assert!(b.holds && b.alpha_sq_holds);
        assert!((b.lower - (3.0 * 0.36 + 2.0 * 0.16)).abs() < 1e-14);
        assert_eq!(b.upper, 4.0);
        assert_eq!(b.disjoint_holds, None);
    }
}
