//! Goodness of fit through super-thinned residuals.
//!
//! Observed events are kept with probability `min(1, b/λ̂(τᵢ))` and points of
//! an inhomogeneous Poisson process with rate `max(0, b − λ̂(t))` are added.
//! Under the true intensity the result is homogeneous Poisson with rate `b`,
//! so the gaps transformed by the exponential CDF are iid uniform.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::model::Intensity;
use crate::simulate::replicate_rng;
use crate::stats;

/// An intensity that can be evaluated at ascending times.
pub trait IntensityFn {
    fn eval_sorted(&self, ts: &[f64]) -> Vec<f64>;
}

impl IntensityFn for Intensity<'_> {
    fn eval_sorted(&self, ts: &[f64]) -> Vec<f64> {
        self.at_sorted(ts)
    }
}

impl<F: Fn(f64) -> f64> IntensityFn for F {
    fn eval_sorted(&self, ts: &[f64]) -> Vec<f64> {
        ts.iter().map(|&t| self(t)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Kept,
    Superposed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperThinResult {
    pub residual_times: Vec<f64>,
    pub origin: Vec<Origin>,
    /// Index into the original catalog for kept points.
    pub source_index: Vec<Option<usize>>,
    pub standardized_u: Vec<f64>,
    pub b: f64,
    pub window_end: f64,
}

impl SuperThinResult {
    pub fn len(&self) -> usize {
        self.residual_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residual_times.is_empty()
    }

    pub fn kept_count(&self) -> usize {
        self.origin.iter().filter(|o| **o == Origin::Kept).count()
    }
}

/// Super-thins `catalog` against `lambda_hat` at rate `b`. Keep/discard
/// decisions and superposed points use separate random streams of `seed`.
pub fn super_thin<L: IntensityFn + ?Sized>(
    catalog: &EventCatalog,
    lambda_hat: &L,
    b: f64,
    seed: u64,
) -> Result<SuperThinResult> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter(format!("thinning rate must be positive, got {b}")));
    }
    let t_end = catalog.window_end();
    let at_events = lambda_hat.eval_sorted(catalog.times());
    if let Some((index, &value)) = at_events.iter().enumerate().find(|(_, &l)| !(l > 0.0)) {
        return Err(Error::NonPositiveIntensity { index, value });
    }

    let mut keep_rng = replicate_rng(seed, 0);
    let mut points: Vec<(f64, Origin, Option<usize>)> = Vec::new();
    for (i, (&t, &l)) in catalog.times().iter().zip(&at_events).enumerate() {
        let p = (b / l).min(1.0);
        if keep_rng.random::<f64>() < p {
            points.push((t, Origin::Kept, Some(i)));
        }
    }

    let mut add_rng = replicate_rng(seed, 1);
    let candidates = {
        let n = rand_distr::Poisson::new(b * t_end)
            .map(|d| rand_distr::Distribution::sample(&d, &mut add_rng) as usize)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut c: Vec<f64> = (0..n).map(|_| add_rng.random::<f64>() * t_end).collect();
        c.sort_by(f64::total_cmp);
        c
    };
    let at_candidates = lambda_hat.eval_sorted(&candidates);
    for (&t, &l) in candidates.iter().zip(&at_candidates) {
        let accept = (1.0 - l / b).max(0.0);
        if add_rng.random::<f64>() < accept {
            points.push((t, Origin::Superposed, None));
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let residual_times: Vec<f64> = points.iter().map(|p| p.0).collect();
    let standardized_u = standardized_interevent(&residual_times, b);
    Ok(SuperThinResult {
        origin: points.iter().map(|p| p.1).collect(),
        source_index: points.iter().map(|p| p.2).collect(),
        residual_times,
        standardized_u,
        b,
        window_end: t_end,
    })
}

/// `uᵢ = 1 − exp(−b rᵢ)` with gaps `rᵢ = tᵢ − tᵢ₋₁`, `t₀ = 0`.
pub fn standardized_interevent(times: &[f64], b: f64) -> Vec<f64> {
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            let r = t - prev;
            prev = t;
            -(-b * r).exp_m1()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov–Smirnov test of `us` against Uniform(0, 1).
pub fn ks_uniformity(us: &[f64]) -> KsTest {
    let statistic = stats::ks_uniform_statistic(us);
    KsTest {
        statistic,
        p_value: stats::ks_p_value(statistic, us.len()),
    }
}

/// `Σ_{i≤k} uᵢ / Σ_{i≤m} uᵢ` for `k = 1..m`.
pub fn normalized_cumsum(us: &[f64]) -> Vec<f64> {
    let total: f64 = us.iter().sum();
    let mut acc = 0.0;
    us.iter()
        .map(|u| {
            acc += u;
            if total > 0.0 {
                acc / total
            } else {
                f64::NAN
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandMethod {
    /// Per-index quantiles at the nominal level.
    Pointwise,
    /// Per-index quantiles at level `1 − α/m`.
    Bonferroni,
    /// Mean ± c·sd, with `c` the level-quantile of each simulated path's
    /// largest standardized excursion, so whole paths are covered.
    #[default]
    Simultaneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityBand {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    pub method: BandMethod,
}

impl UniformityBand {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// Whether every point of `path` lies inside the band.
    pub fn contains(&self, path: &[f64]) -> bool {
        const SLACK: f64 = 1e-12;
        path.len() == self.len()
            && path
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(p, (lo, hi))| *p >= lo - SLACK && *p <= hi + SLACK)
    }
}

/// Band for normalized cumulative sums of `m` iid uniforms from `nsim`
/// simulated paths.
pub fn uniformity_band(
    m: usize,
    nsim: usize,
    level: f64,
    method: BandMethod,
    seed: u64,
) -> Result<UniformityBand> {
    if m == 0 {
        return Err(Error::InvalidParameter("band needs m >= 1".into()));
    }
    if nsim < 100 {
        return Err(Error::InvalidParameter(format!("band needs at least 100 simulations, got {nsim}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("level must be in (0, 1), got {level}")));
    }
    let mut rng = crate::simulate::rng_from_seed(seed);
    let paths: Vec<Vec<f64>> = (0..nsim)
        .map(|_| {
            let us: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            normalized_cumsum(&us)
        })
        .collect();
    let column = |k: usize| -> Vec<f64> { stats::sorted_copy(&paths.iter().map(|p| p[k]).collect::<Vec<_>>()) };

    let (lower, upper) = match method {
        BandMethod::Pointwise | BandMethod::Bonferroni => {
            let alpha = 1.0 - level;
            let tail = if method == BandMethod::Bonferroni {
                alpha / (2.0 * m as f64)
            } else {
                alpha / 2.0
            };
            (0..m)
                .map(|k| {
                    let col = column(k);
                    (stats::quantile_sorted(&col, tail), stats::quantile_sorted(&col, 1.0 - tail))
                })
                .unzip()
        }
        BandMethod::Simultaneous => {
            let centers: Vec<f64> = (0..m).map(|k| stats::mean(&paths.iter().map(|p| p[k]).collect::<Vec<_>>())).collect();
            let scales: Vec<f64> = (0..m).map(|k| stats::sd(&paths.iter().map(|p| p[k]).collect::<Vec<_>>())).collect();
            let excursions: Vec<f64> = paths
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(centers.iter().zip(&scales))
                        .filter(|(_, (_, s))| **s > 1e-12)
                        .map(|(x, (c, s))| (x - c).abs() / s)
                        .fold(0.0, f64::max)
                })
                .collect();
            let c = stats::quantile_sorted(&stats::sorted_copy(&excursions), level);
            centers
                .iter()
                .zip(&scales)
                .map(|(mu, s)| {
                    if *s > 1e-12 {
                        ((mu - c * s).max(0.0), (mu + c * s).min(1.0))
                    } else {
                        (*mu, *mu)
                    }
                })
                .unzip()
        }
    };
    Ok(UniformityBand {
        lower,
        upper,
        level,
        method,
    })
}

/// Root mean squared componentwise error.
pub fn rmse(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            got: estimate.len(),
        });
    }
    if estimate.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ss: f64 = estimate.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((ss / estimate.len() as f64).sqrt())
}
