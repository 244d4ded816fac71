//! Stabilizing raw productivity estimates: lower truncation at zero,
//! Gaussian kernel smoothing, and rescaling so that the estimates account
//! for the `n − μT` events the background does not explain.

use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::model::ProductivityEstimate;
use crate::stats;

/// Sums at or below this are treated as zero when rescaling.
pub const ZERO_SUM_TOLERANCE: f64 = 1e-300;

/// Exponent on `n` in the rule-of-thumb bandwidth.
pub const SILVERMAN_EXPONENT: f64 = -0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// `0.9 · min(sd, IQR/1.34) · n^exponent` of the smoothing locations.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothDomain {
    Time,
    Mark,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || !(end >= start) {
            return Err(Error::InvalidParameter(format!(
                "grid needs step > 0 and end >= start, got [{start}, {end}] step {step}"
            )));
        }
        Ok(Self { start, end, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmootherConfig {
    pub bandwidth: Bandwidth,
    pub domain: SmoothDomain,
    pub grid: Option<Grid>,
    pub silverman_exponent: f64,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        Self {
            bandwidth: Bandwidth::Auto,
            domain: SmoothDomain::Time,
            grid: None,
            silverman_exponent: SILVERMAN_EXPONENT,
        }
    }
}

impl SmootherConfig {
    pub fn resolve_bandwidth(&self, locations: &[f64]) -> Result<f64> {
        match self.bandwidth {
            Bandwidth::Fixed(h) if h.is_finite() && h > 0.0 => Ok(h),
            Bandwidth::Fixed(h) => Err(Error::InvalidParameter(format!(
                "bandwidth must be positive, got {h}"
            ))),
            Bandwidth::Auto => silverman_bandwidth_with_exponent(locations, self.silverman_exponent),
        }
    }
}

/// Replaces every estimate by `max(K̂ᵢ, 0)`.
pub fn truncate_nonneg(est: &ProductivityEstimate) -> ProductivityEstimate {
    let mut out = est.clone();
    for v in &mut out.values {
        *v = v.max(0.0);
    }
    out.flags.truncated = true;
    out
}

/// What to do when the background already accounts for every event
/// (`n − μT < 0`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeTarget {
    /// Leave the estimate unrescaled and log a warning.
    #[default]
    Skip,
    /// Rescale to a total of zero.
    Zero,
    /// Apply the negative factor as is, flipping the sign of every value.
    Signed,
}

/// Multiplies every value by `(n − μT) / Σ K̂ᵢ`.
pub fn rescale_total(
    est: &ProductivityEstimate,
    n: usize,
    mu: f64,
    window_end: f64,
    on_negative: NegativeTarget,
) -> Result<ProductivityEstimate> {
    let target = n as f64 - mu * window_end;
    let target = if target < 0.0 {
        match on_negative {
            NegativeTarget::Skip => {
                log::warn!(
                    "background explains all events (n − μT = {target:.3}); skipping rescaling"
                );
                return Ok(est.clone());
            }
            NegativeTarget::Zero => 0.0,
            NegativeTarget::Signed => target,
        }
    } else {
        target
    };
    let sum = est.sum();
    if !(sum > ZERO_SUM_TOLERANCE) {
        return Err(Error::ZeroSum(sum));
    }
    let factor = target / sum;
    let mut out = est.clone();
    for v in &mut out.values {
        *v *= factor;
    }
    out.flags.rescaled = true;
    Ok(out)
}

/// `0.9 · min(sd, IQR/1.34) · n^(-1/5)`.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    silverman_bandwidth_with_exponent(values, SILVERMAN_EXPONENT)
}

pub fn silverman_bandwidth_with_exponent(values: &[f64], exponent: f64) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "bandwidth rule needs at least 2 values, got {}",
            values.len()
        )));
    }
    let sd = stats::sd(values);
    if !(sd > 0.0) {
        return Err(Error::DegenerateSpread);
    }
    let mut spread = sd.min(stats::iqr(values) / 1.34);
    if !(spread > 0.0) {
        spread = sd;
    }
    Ok(0.9 * spread * (values.len() as f64).powf(exponent))
}

/// Nadaraya–Watson smoother with Gaussian weights `exp(−(x − xᵢ)²/(2h²))`.
pub fn kernel_smooth(xs: &[f64], ys: &[f64], bandwidth: f64, eval_at: &[f64]) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let scale = 1.0 / (2.0 * bandwidth * bandwidth);
    Ok(eval_at
        .iter()
        .map(|&x| {
            // shift exponents by the nearest location so weights never all underflow
            let nearest = xs
                .iter()
                .map(|&xi| (x - xi) * (x - xi))
                .fold(f64::INFINITY, f64::min);
            let (mut num, mut den) = (0.0, 0.0);
            for (&xi, &yi) in xs.iter().zip(ys) {
                let w = (-((x - xi) * (x - xi) - nearest) * scale).exp();
                num += w * yi;
                den += w;
            }
            num / den
        })
        .collect())
}

/// Gaussian kernel density estimate of `xs` at `eval_at`.
pub fn kernel_density(xs: &[f64], bandwidth: f64, eval_at: &[f64]) -> Vec<f64> {
    let norm = 1.0 / (xs.len() as f64 * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    eval_at
        .iter()
        .map(|&x| {
            norm * xs
                .iter()
                .map(|&xi| (-(x - xi) * (x - xi) / (2.0 * bandwidth * bandwidth)).exp())
                .sum::<f64>()
        })
        .collect()
}

/// Smooths an event-level estimate over event times, evaluated at the
/// events themselves.
pub fn smooth_over_time(
    est: &ProductivityEstimate,
    catalog: &EventCatalog,
    cfg: &SmootherConfig,
) -> Result<ProductivityEstimate> {
    let h = cfg.resolve_bandwidth(catalog.times())?;
    let values = kernel_smooth(catalog.times(), &est.values, h, catalog.times())?;
    Ok(ProductivityEstimate {
        values,
        flags: crate::model::PipelineFlags {
            smoothed: true,
            ..est.flags
        },
        bandwidth: Some(h),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Truncate,
    Smooth,
    Rescale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub stages: Vec<Stage>,
    pub smoother: SmootherConfig,
    pub on_negative_target: NegativeTarget,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            stages: vec![Stage::Truncate, Stage::Smooth, Stage::Rescale],
            smoother: SmootherConfig::default(),
            on_negative_target: NegativeTarget::default(),
        }
    }
}

/// Applies the configured stages in order (truncate → smooth → rescale by
/// default). Smoothing is over event times.
pub fn stabilize_pipeline(
    est: &ProductivityEstimate,
    catalog: &EventCatalog,
    mu: f64,
    cfg: &PipelineConfig,
) -> Result<ProductivityEstimate> {
    if est.len() != catalog.len() {
        return Err(Error::LengthMismatch {
            expected: catalog.len(),
            got: est.len(),
        });
    }
    let mut cur = est.clone();
    for stage in &cfg.stages {
        cur = match stage {
            Stage::Truncate => truncate_nonneg(&cur),
            Stage::Smooth => smooth_over_time(&cur, catalog, &cfg.smoother)?,
            Stage::Rescale => rescale_total(
                &cur,
                catalog.len(),
                mu,
                catalog.window_end(),
                cfg.on_negative_target,
            )?,
        };
    }
    Ok(cur)
}

/// Productivity as a function of magnitude on a regular grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkCurve {
    pub grid: Vec<f64>,
    pub step: f64,
    pub values: Vec<f64>,
    /// Estimated mark density at the grid points.
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl MarkCurve {
    /// `Σ f(mⱼ) K(mⱼ) δm`.
    pub fn weighted_mass(&self) -> f64 {
        self.density
            .iter()
            .zip(&self.values)
            .map(|(f, k)| f * k)
            .sum::<f64>()
            * self.step
    }
}

/// Default grid spacing in mark units.
pub const DEFAULT_MARK_STEP: f64 = 0.05;

/// Smooths event-level estimates against marks onto a grid, then rescales
/// so that `Σ f(m) K(m) δm = 1 − μT/n`, with `f` a Gaussian KDE of the marks
/// using the same bandwidth.
pub fn smooth_by_mark(
    est: &ProductivityEstimate,
    marks: &[f64],
    mu: f64,
    window_end: f64,
    cfg: &SmootherConfig,
) -> Result<MarkCurve> {
    if marks.is_empty() {
        return Err(Error::EmptyInput);
    }
    if marks.len() != est.len() {
        return Err(Error::LengthMismatch {
            expected: marks.len(),
            got: est.len(),
        });
    }
    let grid = match cfg.grid {
        Some(g) => g,
        None => {
            let lo = marks.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = marks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Grid::new(lo, hi, DEFAULT_MARK_STEP)?
        }
    };
    let h = match cfg.resolve_bandwidth(marks) {
        Ok(h) => h,
        // identical marks: one occupied cell, any positive width works
        Err(Error::DegenerateSpread) => grid.step,
        Err(e) => return Err(e),
    };
    let points = grid.points();
    let mut values = kernel_smooth(marks, &est.values, h, &points)?;
    let density = kernel_density(marks, h, &points);
    let n = marks.len() as f64;
    let target = 1.0 - mu * window_end / n;
    let mass: f64 = density.iter().zip(&values).map(|(f, k)| f * k).sum::<f64>() * grid.step;
    if !(mass.abs() > ZERO_SUM_TOLERANCE) {
        return Err(Error::ZeroSum(mass));
    }
    let factor = target / mass;
    for v in &mut values {
        *v *= factor;
    }
    Ok(MarkCurve {
        grid: points,
        step: grid.step,
        values,
        density,
        bandwidth: h,
    })
}
