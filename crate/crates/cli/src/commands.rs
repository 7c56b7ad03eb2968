use std::collections::BTreeMap;

use serde::Serialize;

use ctsearch_core::efficiency::{
    compare_with_id, first_residual_zero, misplaced_confidence_curve, scenario_bounds, BoundReport,
    Comparison, MisplacedShape,
};
use ctsearch_core::full_sim::{cross_check, time_grid, SubspaceCheck};
use ctsearch_core::phase::{
    counting_scenario, measurement_distribution, run_counting, CountReport, CountingConfig,
    PhaseEstimate, SearchDevice, VerificationConfig, DEFAULT_REGISTER_SIZE,
};
use ctsearch_core::reduced::{self, default_trajectory};
use ctsearch_core::rng::{self, CdfSampler};
use ctsearch_core::scenario::ScenarioFile;
use ctsearch_core::{weighted_superposition, SearchScenario, SCHEMA_VERSION};

use crate::output::Artifact;
use crate::{stream_tag, CliError, Command, RunConfig, SweepConfig};

/// Library example: books on hunting, fishing and hiking, one title in
/// all three shelves.
pub const DEMO_SCENARIO: &str = include_str!("../scenarios/library.json");

const DEFAULT_SIMULATE_SAMPLES: usize = 1000;
const DEFAULT_ESTIMATE_SAMPLES: usize = 50;
const VERIFY_GRID_POINTS: usize = 64;
const VERIFY_TOL: f64 = 1e-10;
const SWEEP_STEP: f64 = 0.01;

#[derive(Serialize)]
struct Header<'a> {
    schema_version: u32,
    command: &'a str,
    seed: u64,
}

impl<'a> Header<'a> {
    fn new(config: &'a RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: config.command.name(),
            seed: config.seed,
        }
    }
}

#[derive(Serialize)]
struct ScenarioSummary {
    source: String,
    n_items: usize,
    n_targets: usize,
    n_sets: usize,
    support_size: usize,
    energy: f64,
    weights_renormalized: bool,
}

fn load_scenario(config: &RunConfig) -> Result<(SearchScenario, ScenarioSummary), CliError> {
    let (scenario, source) = match &config.scenario_path {
        Some(p) => (SearchScenario::from_path(p)?, p.display().to_string()),
        None => (
            SearchScenario::from_json_str(DEMO_SCENARIO)?,
            "demo:library".to_string(),
        ),
    };
    let scenario = match config.energy {
        Some(e) => scenario.with_energy(e)?,
        None => scenario,
    };
    let summary = ScenarioSummary {
        source,
        n_items: scenario.n_items(),
        n_targets: scenario.n_targets(),
        n_sets: scenario.info_sets().len(),
        support_size: scenario.support_size(),
        energy: scenario.energy(),
        weights_renormalized: scenario.weights_renormalized(),
    };
    Ok((scenario, summary))
}

fn label(scenario: &SearchScenario, item: usize) -> String {
    scenario
        .labels()
        .and_then(|l| l.get(item).cloned())
        .unwrap_or_else(|| item.to_string())
}

/// Rendered outputs plus any invariant the run found violated. Reports
/// are still written when `violation` is set.
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub violation: Option<String>,
}

impl From<Vec<Artifact>> for RunOutput {
    fn from(artifacts: Vec<Artifact>) -> Self {
        Self {
            artifacts,
            violation: None,
        }
    }
}

pub fn build_artifacts(config: &RunConfig) -> Result<RunOutput, CliError> {
    match config.command {
        Command::Simulate => simulate(config).map(Into::into),
        Command::Verify => verify(config),
        Command::Estimate => estimate(config).map(Into::into),
        Command::Count => count(config).map(Into::into),
        Command::Sweep => sweep(config).map(Into::into),
        Command::Compare => compare(config).map(Into::into),
    }
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    re_a: f64,
    im_a: f64,
    re_b: f64,
    im_b: f64,
    success_prob: f64,
}

#[derive(Serialize)]
struct ItemRow {
    item: usize,
    label: String,
    is_target: bool,
    probability: f64,
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    scenario: ScenarioSummary,
    y: f64,
    nu: f64,
    r_count: usize,
    #[serde(rename = "T")]
    t: f64,
    target_mass: f64,
    failure_mass: f64,
    /// Support items only; everything else has probability zero.
    items: Vec<ItemRow>,
    n_samples: usize,
    sample_counts: BTreeMap<usize, usize>,
}

fn simulate(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (scenario, summary) = load_scenario(config)?;
    let e = scenario.energy();
    let prep = weighted_superposition(&scenario)?;
    let t = reduced::optimal_time(prep.y, e)?;
    let dist = reduced::success_distribution(&prep, e, t)?;

    let trajectory: Vec<TrajectoryRow> = default_trajectory(prep.y, e)?
        .into_iter()
        .map(|p| TrajectoryRow {
            t: p.t,
            re_a: p.state.a.re,
            im_a: p.state.a.im,
            re_b: p.state.b.re,
            im_b: p.state.b.im,
            success_prob: p.success_prob,
        })
        .collect();

    let support = scenario.support();
    let items: Vec<ItemRow> = support
        .iter()
        .map(|&i| ItemRow {
            item: i,
            label: label(&scenario, i),
            is_target: scenario.targets().contains(&i),
            probability: dist.item_probs[i],
        })
        .collect();

    let n_samples = config.n_samples.unwrap_or(DEFAULT_SIMULATE_SAMPLES);
    let mut rng = rng::stream(config.seed, &stream_tag(config.command));
    let sampler = CdfSampler::new(&dist.item_probs)?;
    let mut sample_counts = BTreeMap::new();
    for _ in 0..n_samples {
        *sample_counts.entry(sampler.sample(&mut rng)).or_insert(0) += 1;
    }

    let report = SimulateReport {
        header: Header::new(config),
        scenario: summary,
        y: prep.y,
        nu: prep.nu,
        r_count: prep.r_count,
        t,
        target_mass: dist.target_mass,
        failure_mass: dist.failure_mass,
        items,
        n_samples,
        sample_counts,
    };
    Ok(vec![
        Artifact::json("simulate.json", &report)?,
        Artifact::csv("trajectory.csv", &trajectory)?,
        Artifact::csv("success_distribution.csv", &report.items)?,
    ])
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    scenario: ScenarioSummary,
    tolerance: f64,
    t_max: f64,
    #[serde(flatten)]
    check: SubspaceCheck,
    passed: bool,
}

fn verify(config: &RunConfig) -> Result<RunOutput, CliError> {
    let (scenario, summary) = load_scenario(config)?;
    let prep = weighted_superposition(&scenario)?;
    let t = reduced::optimal_time(prep.y, scenario.energy())?;
    let t_max = 2.0 * t;
    let check = cross_check(&scenario, &prep, &time_grid(t_max, VERIFY_GRID_POINTS))?;
    let mut failures = Vec::new();
    if check.max_residual > VERIFY_TOL {
        failures.push(format!(
            "invariant subspace residual {:e}",
            check.max_residual
        ));
    }
    if check.max_deviation > VERIFY_TOL {
        failures.push(format!("reduced/full deviation {:e}", check.max_deviation));
    }
    if check.max_norm_error > VERIFY_TOL {
        failures.push(format!("norm conservation {:e}", check.max_norm_error));
    }
    let report = VerifyReport {
        header: Header::new(config),
        scenario: summary,
        tolerance: VERIFY_TOL,
        t_max,
        check,
        passed: failures.is_empty(),
    };
    Ok(RunOutput {
        artifacts: vec![Artifact::json("verify.json", &report)?],
        violation: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

#[derive(Serialize)]
struct DistributionRow {
    k: usize,
    phase: f64,
    prob: f64,
    given_y: f64,
    given_one_minus_y: f64,
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    scenario: ScenarioSummary,
    n_samples: usize,
    #[serde(flatten)]
    estimate: PhaseEstimate,
    oracle_queries: u64,
    /// Exact overlap from state preparation, for comparison only.
    y_reference: f64,
}

fn estimate(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (scenario, summary) = load_scenario(config)?;
    let m_size = config.m_size.unwrap_or(DEFAULT_REGISTER_SIZE);
    let n_samples = config.n_samples.unwrap_or(DEFAULT_ESTIMATE_SAMPLES);
    let prep = weighted_superposition(&scenario)?;
    let device = SearchDevice::new(&prep, scenario.energy())?;
    let oracle = scenario.oracle();
    let mut rng = rng::stream(config.seed, &stream_tag(config.command));
    let estimate = ctsearch_core::phase::estimate_on_device(
        &device,
        &oracle,
        m_size,
        n_samples,
        VerificationConfig::default(),
        &mut rng,
    )?;

    let dist = measurement_distribution(prep.y, m_size)?;
    let rows: Vec<DistributionRow> = (0..m_size)
        .map(|k| DistributionRow {
            k,
            phase: k as f64 / m_size as f64,
            prob: dist.probs[k],
            given_y: dist.given_y[k],
            given_one_minus_y: dist.given_one_minus_y[k],
        })
        .collect();

    let report = EstimateReport {
        header: Header::new(config),
        scenario: summary,
        n_samples,
        estimate,
        oracle_queries: oracle.queries(),
        y_reference: prep.y,
    };
    Ok(vec![
        Artifact::json("estimate.json", &report)?,
        Artifact::csv("phase_distribution.csv", &rows)?,
    ])
}

#[derive(Serialize)]
struct HistogramRow {
    k: usize,
    count: usize,
}

#[derive(Serialize)]
struct CountOutput<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    scenario: ScenarioSummary,
    n_samples: usize,
    disjoint_scenario: ScenarioFile,
    #[serde(flatten)]
    report: CountReport,
    /// True count, read after the run for comparison only.
    l_reference: usize,
}

fn count(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (scenario, summary) = load_scenario(config)?;
    let counting = CountingConfig {
        m_size: config.m_size,
        n_samples: config
            .n_samples
            .unwrap_or(CountingConfig::default().n_samples),
        verification: VerificationConfig::default(),
    };
    let mut rng = rng::stream(config.seed, &stream_tag(config.command));
    let report = run_counting(&scenario, counting, &mut rng)?;
    let rows: Vec<HistogramRow> = report
        .estimate
        .k_histogram
        .iter()
        .map(|(&k, &count)| HistogramRow { k, count })
        .collect();
    let output = CountOutput {
        header: Header::new(config),
        scenario: summary,
        n_samples: counting.n_samples,
        disjoint_scenario: counting_scenario(&scenario)?.to_file(),
        report,
        l_reference: scenario.n_targets(),
    };
    Ok(vec![
        Artifact::json("count.json", &output)?,
        Artifact::csv("count_histogram.csv", &rows)?,
    ])
}

#[derive(Serialize)]
struct SweepRow {
    alpha2: f64,
    nu: f64,
    y: f64,
    #[serde(rename = "T")]
    t: f64,
    t_simulated: f64,
    abs_error: f64,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    shape: MisplacedShape,
    energy: f64,
    grid: SweepConfig,
    max_abs_error: f64,
    /// Whether `T` rises strictly across the whole grid.
    increasing: bool,
    /// `T` at the last grid point over `T` at the first.
    t_ratio_last_first: f64,
    points: Vec<SweepRow>,
    bounds: Vec<BoundReport>,
}

fn sweep(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let s = config.sweep;
    let shape = MisplacedShape {
        l: s.l,
        n1: s.n1,
        n2: s.n2,
        n12: s.n12,
    };
    let energy = config.energy.unwrap_or(1.0);
    let grid = s.grid();
    let curve = misplaced_confidence_curve(shape, &grid, energy)?;
    let mut rows = Vec::with_capacity(curve.len());
    let mut bounds = Vec::new();
    for p in &curve {
        let scenario = shape.scenario(p.alpha2, energy)?;
        let prep = weighted_superposition(&scenario)?;
        let t_sim = first_residual_zero(&prep, energy, SWEEP_STEP / energy, 1e9 / energy)?;
        rows.push(SweepRow {
            alpha2: p.alpha2,
            nu: p.nu,
            y: p.y,
            t: p.t,
            t_simulated: t_sim,
            abs_error: (t_sim - p.t).abs(),
        });
        let id = format!("alpha2={}", p.alpha2);
        bounds.extend(scenario_bounds(&id, &scenario, &prep)?);
    }
    let report = SweepReport {
        header: Header::new(config),
        shape,
        energy,
        grid: s,
        max_abs_error: rows.iter().map(|r| r.abs_error).fold(0.0, f64::max),
        increasing: curve.windows(2).all(|w| w[1].t > w[0].t),
        t_ratio_last_first: curve[curve.len() - 1].t / curve[0].t,
        points: rows,
        bounds,
    };
    Ok(vec![
        Artifact::json("sweep.json", &report)?,
        Artifact::csv("sweep.csv", &report.points)?,
    ])
}

#[derive(Serialize)]
struct CompareReport<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    scenario: ScenarioSummary,
    #[serde(flatten)]
    comparison: Comparison,
}

fn compare(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (scenario, summary) = load_scenario(config)?;
    let id = summary.source.clone();
    let comparison = compare_with_id(&scenario, &id)?;
    let report = CompareReport {
        header: Header::new(config),
        scenario: summary,
        comparison,
    };
    Ok(vec![
        Artifact::json("compare.json", &report)?,
        Artifact::csv("bounds.csv", &report.comparison.bounds)?,
    ])
}
