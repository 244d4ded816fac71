//! Scripted simulation studies: the RMSE comparison across productivity
//! shapes, the stabilization ladder, the ETAS magnitude study and the
//! noise-sensitivity study.
//!
//! Every study is deterministic given its seed. Replicate `i` draws from
//! stream `i` of the seed, replicates run in parallel, and aggregates are
//! reduced in sorted order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::rmse;
use crate::error::{Error, Result};
use crate::estimate::{
    build_triggering_matrix, empirical_productivities, mle_productivities,
    productivities_from_intensities, SolveOptions, DEFAULT_DELTA,
};
use crate::kernel::TriggeringKernel;
use crate::model::{Intensity, ProductivityEstimate};
use crate::simulate::{
    replicate_rng, simulate_with_rng, EtasConfig, MagnitudeDistribution, ProductivitySpec,
    SimulatedProcess, SimulationConfig,
};
use crate::stabilize::{
    rescale_total, smooth_by_mark, smooth_over_time, truncate_nonneg, Grid, NegativeTarget,
    SmootherConfig,
};
use crate::stats;

pub const DEFAULT_REPLICATES: usize = 100;
pub const PAPER_REPLICATES: usize = 1000;

/// Background rate shared by the time-varying scenarios.
pub const SCENARIO_MU: f64 = 0.5;
/// Exponential kernel rate shared by the time-varying scenarios.
pub const SCENARIO_BETA: f64 = 0.7;
pub const SCENARIO_WINDOW: f64 = 1000.0;

/// Growth rate of the exponential-trend scenario. A positive rate of 0.007
/// makes `K(t)` exceed 1 after `t ≈ 51` and reach ~767 by `t = 1000`, so the
/// cascade never terminates; the decaying trend is simulated instead.
pub const EXPONENTIAL_TREND_RATE: f64 = -0.007;

pub fn normal_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

pub fn cauchy_density(x: f64, location: f64, scale: f64) -> f64 {
    let z = (x - location) / scale;
    1.0 / (PI * scale * (1.0 + z * z))
}

/// `80 φ(t; 200, 60²) + 40 φ(t; 800, 70²)`.
pub fn normals_productivity(t: f64) -> f64 {
    80.0 * normal_density(t, 200.0, 60.0) + 40.0 * normal_density(t, 800.0, 70.0)
}

/// `0.7 exp(r t)` with `r` = [`EXPONENTIAL_TREND_RATE`].
pub fn exponential_productivity(t: f64) -> f64 {
    0.7 * (EXPONENTIAL_TREND_RATE * t).exp()
}

pub fn constant_productivity(_t: f64) -> f64 {
    0.01
}

/// `100 ψ(t)` with `ψ` the Cauchy(700, 100) density.
pub fn cauchy_productivity(t: f64) -> f64 {
    100.0 * cauchy_density(t, 700.0, 100.0)
}

/// `4 φ(gap; 5, 1)` of the time since the previous event.
pub fn renewal_productivity(gap: f64) -> f64 {
    4.0 * normal_density(gap, 5.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Normals,
    Exponential,
    Constant,
    Cauchy,
    Renewal,
    Etas,
}

impl Scenario {
    pub const TIME_VARYING: [Scenario; 5] = [
        Scenario::Normals,
        Scenario::Exponential,
        Scenario::Constant,
        Scenario::Cauchy,
        Scenario::Renewal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Normals => "normals",
            Scenario::Exponential => "exponential",
            Scenario::Constant => "constant",
            Scenario::Cauchy => "cauchy",
            Scenario::Renewal => "renewal",
            Scenario::Etas => "etas",
        }
    }

    pub fn productivity(&self) -> ProductivitySpec {
        match self {
            Scenario::Normals => ProductivitySpec::time_function(normals_productivity),
            Scenario::Exponential => ProductivitySpec::time_function(exponential_productivity),
            Scenario::Constant => ProductivitySpec::Constant(0.01),
            Scenario::Cauchy => ProductivitySpec::time_function(cauchy_productivity),
            Scenario::Renewal => ProductivitySpec::renewal(renewal_productivity),
            Scenario::Etas => {
                let e = etas_study_config();
                ProductivitySpec::Magnitude {
                    base: e.base_productivity,
                    scale: e.magnitude_scale,
                    m0: e.magnitudes.m0,
                }
            }
        }
    }

    pub fn simulation(&self, window_end: f64) -> SimulationConfig {
        match self {
            Scenario::Etas => {
                let e = etas_study_config();
                SimulationConfig::new(e.mu, e.kernel, self.productivity(), window_end)
                    .with_magnitudes(e.magnitudes)
            }
            _ => SimulationConfig::new(
                SCENARIO_MU,
                TriggeringKernel::Exponential { beta: SCENARIO_BETA },
                self.productivity(),
                window_end,
            ),
        }
    }

    /// Mean RMSEs (unscaled empirical, closed-form MLE, scaled empirical)
    /// reported for 1000 replicates.
    pub fn paper_rmse(&self) -> Option<[f64; 3]> {
        match self {
            Scenario::Normals => Some([1.75, 0.187, 0.0925]),
            Scenario::Exponential => Some([1.90, 0.171, 0.0912]),
            Scenario::Constant => Some([1.08, 0.121, 0.0570]),
            Scenario::Cauchy => Some([1.23, 0.210, 0.188]),
            Scenario::Renewal => Some([1.14, 0.761, 0.626]),
            Scenario::Etas => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "normals" => Scenario::Normals,
            "exponential" => Scenario::Exponential,
            "constant" => Scenario::Constant,
            "cauchy" => Scenario::Cauchy,
            "renewal" => Scenario::Renewal,
            "etas" => Scenario::Etas,
            other => return Err(Error::InvalidParameter(format!("unknown scenario '{other}'"))),
        })
    }
}

/// ETAS magnitude-study parameters: `K = 0.2 e^{1.2(m − 3.5)}`, exponential
/// kernel with rate 2.7, background 0.1, magnitudes exponential with rate
/// 2.3 above 3.5, on `[0, 1000]`.
pub fn etas_study_config() -> EtasConfig {
    EtasConfig {
        mu: 0.1,
        kernel: TriggeringKernel::Exponential { beta: 2.7 },
        base_productivity: 0.2,
        magnitude_scale: 1.2,
        magnitudes: MagnitudeDistribution { rate: 2.3, m0: 3.5 },
        window_end: 1000.0,
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub replicates: usize,
    pub window_end: f64,
    pub seed: u64,
    /// Counting window of the empirical estimator.
    pub delta: f64,
    pub smoother: SmootherConfig,
    pub on_negative_target: NegativeTarget,
    pub solve: SolveOptions,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            replicates: DEFAULT_REPLICATES,
            window_end: SCENARIO_WINDOW,
            seed: 20_210_301,
            delta: DEFAULT_DELTA,
            smoother: SmootherConfig::default(),
            on_negative_target: NegativeTarget::Signed,
            solve: SolveOptions::default(),
        }
    }

    pub fn with_replicates(mut self, n: usize) -> Self {
        self.replicates = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicate count must be >= 1".into()));
        }
        Ok(())
    }

    pub fn simulate_replicate(&self, index: usize) -> Result<SimulatedProcess> {
        let cfg = self.scenario.simulation(self.window_end);
        simulate_with_rng(&cfg, &mut replicate_rng(self.seed, index as u64))
    }

    fn mu(&self) -> f64 {
        self.scenario.simulation(self.window_end).mu
    }

    fn kernel(&self) -> TriggeringKernel {
        self.scenario.simulation(self.window_end).kernel
    }
}

/// RMSEs of one replicate against the simulated truth. MLE entries are
/// `None` when the triggering matrix was singular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateScores {
    pub index: usize,
    pub n: usize,
    pub unscaled_empirical: f64,
    pub scaled_empirical: f64,
    pub mle_raw: Option<f64>,
    pub mle_truncated_smoothed: Option<f64>,
    pub mle_pipeline: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl MeanSd {
    /// Sorted before summing so the result does not depend on replicate order.
    pub fn of(values: &[f64]) -> Self {
        let sorted = stats::sorted_copy(values);
        if sorted.is_empty() {
            return Self {
                mean: f64::NAN,
                sd: f64::NAN,
                count: 0,
            };
        }
        Self {
            mean: stats::mean(&sorted),
            sd: stats::sd(&sorted),
            count: sorted.len(),
        }
    }
}

impl fmt::Display for MeanSd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, self.sd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub replicates: usize,
    pub unscaled_empirical: MeanSd,
    pub mle_pipeline: MeanSd,
    pub scaled_empirical: MeanSd,
    pub mle_raw: MeanSd,
    pub mle_truncated_smoothed: MeanSd,
    /// Replicates whose triggering matrix could not be solved.
    pub singular_failures: usize,
    pub per_replicate: Vec<ReplicateScores>,
}

impl ScenarioSummary {
    pub fn failure_rate(&self) -> f64 {
        self.singular_failures as f64 / self.replicates as f64
    }
}

fn stages_time(
    raw: &ProductivityEstimate,
    sim: &SimulatedProcess,
    mu: f64,
    cfg: &ExperimentConfig,
) -> Result<(ProductivityEstimate, ProductivityEstimate)> {
    let smoothed = smooth_over_time(&truncate_nonneg(raw), &sim.catalog, &cfg.smoother)?;
    let rescaled = rescale_total(
        &smoothed,
        sim.n(),
        mu,
        sim.catalog.window_end(),
        cfg.on_negative_target,
    )?;
    Ok((smoothed, rescaled))
}

fn score_replicate(cfg: &ExperimentConfig, index: usize) -> Result<ReplicateScores> {
    let sim = cfg.simulate_replicate(index)?;
    let mu = cfg.mu();
    let truth = &sim.productivity;
    let emp = empirical_productivities(&sim.catalog, cfg.delta, mu)?;
    let (emp_ts, emp_tsr) = stages_time(&emp, &sim, mu, cfg)?;

    let (mle_raw, mle_ts, mle_tsr) = match mle_productivities(&sim.catalog, mu, &cfg.kernel(), &cfg.solve) {
        Ok(sol) => {
            let (ts, tsr) = stages_time(&sol.estimate, &sim, mu, cfg)?;
            (
                Some(rmse(&sol.estimate.values, truth)?),
                Some(rmse(&ts.values, truth)?),
                Some(rmse(&tsr.values, truth)?),
            )
        }
        Err(Error::SingularMatrix { .. }) => (None, None, None),
        Err(e) => return Err(e),
    };
    Ok(ReplicateScores {
        index,
        n: sim.n(),
        unscaled_empirical: rmse(&emp_ts.values, truth)?,
        scaled_empirical: rmse(&emp_tsr.values, truth)?,
        mle_raw,
        mle_truncated_smoothed: mle_ts,
        mle_pipeline: mle_tsr,
    })
}

/// Per-replicate RMSEs of the unscaled empirical, closed-form MLE and
/// scaled empirical estimators, all truncated and smoothed over time.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<ScenarioSummary> {
    cfg.validate()?;
    if cfg.scenario == Scenario::Etas {
        return Err(Error::InvalidParameter(
            "the ETAS scenario is scored in the mark domain; use run_etas_magnitude".into(),
        ));
    }
    let per_replicate = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| score_replicate(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let collect = |f: &dyn Fn(&ReplicateScores) -> Option<f64>| -> Vec<f64> {
        per_replicate.iter().filter_map(f).collect()
    };
    Ok(ScenarioSummary {
        scenario: cfg.scenario,
        replicates: cfg.replicates,
        unscaled_empirical: MeanSd::of(&collect(&|r| Some(r.unscaled_empirical))),
        mle_pipeline: MeanSd::of(&collect(&|r| r.mle_pipeline)),
        scaled_empirical: MeanSd::of(&collect(&|r| Some(r.scaled_empirical))),
        mle_raw: MeanSd::of(&collect(&|r| r.mle_raw)),
        mle_truncated_smoothed: MeanSd::of(&collect(&|r| r.mle_truncated_smoothed)),
        singular_failures: per_replicate.iter().filter(|r| r.mle_pipeline.is_none()).count(),
        per_replicate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub label: String,
    pub value: f64,
    pub target: f64,
    pub passed: bool,
}

/// Compares a summary against the reported RMSEs: ±50% and strict ordering
/// for the normals, exponential and constant rows; ±60% on the MLE and
/// scaled-empirical columns for the Cauchy and renewal rows.
pub fn check_against_paper(summary: &ScenarioSummary) -> Vec<CheckOutcome> {
    let Some(target) = summary.scenario.paper_rmse() else {
        return Vec::new();
    };
    let measured = [
        summary.unscaled_empirical.mean,
        summary.mle_pipeline.mean,
        summary.scaled_empirical.mean,
    ];
    let labels = ["unscaled empirical", "closed-form MLE", "scaled empirical"];
    let name = summary.scenario.name();
    let mut out = Vec::new();
    let (columns, tol): (&[usize], f64) = match summary.scenario {
        Scenario::Cauchy | Scenario::Renewal => (&[1, 2], 0.6),
        _ => (&[0, 1, 2], 0.5),
    };
    for &c in columns {
        out.push(CheckOutcome {
            label: format!("{name}: {} within ±{:.0}%", labels[c], tol * 100.0),
            value: measured[c],
            target: target[c],
            passed: (measured[c] - target[c]).abs() <= tol * target[c],
        });
    }
    if columns.len() == 3 {
        out.push(CheckOutcome {
            label: format!("{name}: unscaled empirical > MLE > scaled empirical"),
            value: f64::NAN,
            target: f64::NAN,
            passed: measured[0] > measured[1] && measured[1] > measured[2],
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtasStudy {
    /// Common grid from the magnitude cutoff to the largest magnitude of any
    /// replicate. Per-replicate curves cover a prefix of it.
    pub grid: Vec<f64>,
    pub true_curve: Vec<f64>,
    pub mle_curves: Vec<Vec<f64>>,
    pub empirical_curves: Vec<Vec<f64>>,
    pub mle_mean_curve: Vec<f64>,
    pub empirical_mean_curve: Vec<f64>,
    pub mle_rmse: Vec<f64>,
    pub empirical_rmse: Vec<f64>,
    pub singular_failures: usize,
}

impl EtasStudy {
    pub fn mean_mle_rmse(&self) -> f64 {
        MeanSd::of(&self.mle_rmse).mean
    }

    pub fn mean_empirical_rmse(&self) -> f64 {
        MeanSd::of(&self.empirical_rmse).mean
    }
}

#[derive(Debug, Clone)]
pub struct EtasStudyConfig {
    pub etas: EtasConfig,
    pub replicates: usize,
    pub seed: u64,
    pub delta: f64,
    pub smoother: SmootherConfig,
    pub grid_step: f64,
    pub solve: SolveOptions,
}

impl Default for EtasStudyConfig {
    fn default() -> Self {
        Self {
            etas: etas_study_config(),
            replicates: 10,
            seed: 20_210_304,
            delta: DEFAULT_DELTA,
            smoother: SmootherConfig {
                domain: crate::stabilize::SmoothDomain::Mark,
                ..SmootherConfig::default()
            },
            grid_step: 0.05,
            // long quiet gaps make diagonal entries of G tiny but exact
            solve: SolveOptions {
                pivot_tolerance: 0.0,
                ridge: 0.0,
            },
        }
    }
}

/// Estimates productivity as a function of magnitude for simulated ETAS
/// catalogs with both estimators, on a grid from the magnitude cutoff to
/// the largest simulated magnitude.
pub fn run_etas_magnitude(cfg: &EtasStudyConfig) -> Result<EtasStudy> {
    if cfg.replicates == 0 {
        return Err(Error::InvalidParameter("replicate count must be >= 1".into()));
    }
    let e = cfg.etas;
    let sim_cfg = SimulationConfig::new(
        e.mu,
        e.kernel,
        ProductivitySpec::Magnitude {
            base: e.base_productivity,
            scale: e.magnitude_scale,
            m0: e.magnitudes.m0,
        },
        e.window_end,
    )
    .with_magnitudes(e.magnitudes);
    let sims = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| simulate_with_rng(&sim_cfg, &mut replicate_rng(cfg.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;

    let m0 = e.magnitudes.m0;
    let max_mark = sims
        .iter()
        .filter_map(|s| s.catalog.marks())
        .flatten()
        .copied()
        .fold(m0, f64::max);
    let grid = Grid::new(m0, max_mark, cfg.grid_step)?;
    let points = grid.points();
    let true_curve: Vec<f64> = points
        .iter()
        .map(|m| e.base_productivity * (e.magnitude_scale * (m - m0)).exp())
        .collect();
    let curves = sims
        .par_iter()
        .map(|sim| -> Result<(Option<Vec<f64>>, Vec<f64>)> {
            let marks = sim.catalog.marks().unwrap_or_default();
            // each replicate is scored on the part of the grid its own magnitudes reach
            let own_max = marks.iter().copied().fold(m0, f64::max);
            let smoother = SmootherConfig {
                grid: Some(Grid::new(m0, own_max, cfg.grid_step)?),
                ..cfg.smoother
            };
            let emp = empirical_productivities(&sim.catalog, cfg.delta, e.mu)?;
            let emp_curve =
                smooth_by_mark(&truncate_nonneg(&emp), marks, e.mu, e.window_end, &smoother)?;
            let mle_curve = match mle_productivities(&sim.catalog, e.mu, &e.kernel, &cfg.solve) {
                Ok(sol) => Some(
                    smooth_by_mark(&truncate_nonneg(&sol.estimate), marks, e.mu, e.window_end, &smoother)?
                        .values,
                ),
                Err(Error::SingularMatrix { .. }) => None,
                Err(err) => return Err(err),
            };
            Ok((mle_curve, emp_curve.values))
        })
        .collect::<Result<Vec<_>>>()?;

    let singular_failures = curves.iter().filter(|c| c.0.is_none()).count();
    let mle_curves: Vec<Vec<f64>> = curves.iter().filter_map(|c| c.0.clone()).collect();
    let empirical_curves: Vec<Vec<f64>> = curves.into_iter().map(|c| c.1).collect();
    // curves are prefixes of the common grid; average whatever covers each point
    let average = |cs: &[Vec<f64>]| -> Vec<f64> {
        (0..points.len())
            .map(|j| MeanSd::of(&cs.iter().filter_map(|c| c.get(j).copied()).collect::<Vec<_>>()).mean)
            .collect()
    };
    let score = |cs: &[Vec<f64>]| -> Result<Vec<f64>> {
        cs.iter().map(|c| rmse(c, &true_curve[..c.len()])).collect()
    };
    Ok(EtasStudy {
        mle_mean_curve: average(&mle_curves),
        empirical_mean_curve: average(&empirical_curves),
        mle_rmse: score(&mle_curves)?,
        empirical_rmse: score(&empirical_curves)?,
        grid: points,
        true_curve,
        mle_curves,
        empirical_curves,
        singular_failures,
    })
}

/// Seed of the frozen normals-scenario catalog used by the noise study; it
/// yields 567 events on `[0, 1000]`.
pub const NOISE_CATALOG_SEED: u64 = 76;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub sigma: f64,
    pub lambda_rmse: f64,
    pub k_rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseStudy {
    pub n: usize,
    pub rows: Vec<NoiseRow>,
    /// RMSE with no noise when only the last event's estimate is wrong.
    pub last_event_floor: f64,
}

impl NoiseStudy {
    /// Rank correlation between the λ and K errors across the grid.
    pub fn spearman(&self) -> f64 {
        let l: Vec<f64> = self.rows.iter().map(|r| r.lambda_rmse).collect();
        let k: Vec<f64> = self.rows.iter().map(|r| r.k_rmse).collect();
        stats::spearman(&l, &k)
    }
}

/// How the noise vectors are drawn across the σ grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseDraws {
    /// One standard-normal vector, scaled by each σ.
    #[default]
    Common,
    /// A fresh vector for every σ.
    Independent,
}

/// `count` evenly spaced noise levels from 0 to `max`.
pub fn sigma_grid(max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| max * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Perturbs the true intensities at the events of one simulated catalog by
/// iid `N(0, σ²)` noise and recovers productivities from the linear system
/// `λ = μ + Gᵀ K`.
pub fn run_noise_sensitivity(
    sim: &SimulatedProcess,
    mu: f64,
    kernel: &TriggeringKernel,
    sigmas: &[f64],
    draws: NoiseDraws,
    seed: u64,
) -> Result<NoiseStudy> {
    let truth = &sim.productivity;
    let n = sim.n();
    if n < 2 {
        return Err(Error::InvalidParameter("noise study needs at least 2 events".into()));
    }
    let lambda = Intensity::new(&sim.catalog, mu, *kernel, truth)?.at_events();
    let g = build_triggering_matrix(&sim.catalog, kernel)?;
    let solve = SolveOptions {
        pivot_tolerance: 0.0,
        ridge: 0.0,
    };
    let rows = sigmas
        .par_iter()
        .enumerate()
        .map(|(i, &sigma)| -> Result<NoiseRow> {
            let stream = match draws {
                NoiseDraws::Common => 0,
                NoiseDraws::Independent => i as u64,
            };
            let mut rng = replicate_rng(seed, stream);
            let noisy: Vec<f64> = lambda
                .iter()
                .map(|l| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    l + sigma * z
                })
                .collect();
            let mut k = productivities_from_intensities(&g, &noisy[1..], mu, &solve)?;
            k.push(0.0);
            Ok(NoiseRow {
                sigma,
                lambda_rmse: rmse(&noisy, &lambda)?,
                k_rmse: rmse(&k, truth)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NoiseStudy {
        n,
        rows,
        last_event_floor: truth[n - 1].abs() / (n as f64).sqrt(),
    })
}

/// The frozen catalog of the noise study: one normals-scenario realization.
pub fn noise_catalog() -> Result<SimulatedProcess> {
    ExperimentConfig::new(Scenario::Normals)
        .with_seed(NOISE_CATALOG_SEED)
        .simulate_replicate(0)
}
