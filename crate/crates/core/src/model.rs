//! Model parameters, productivity estimates and the conditional intensity
//! `λ(t) = μ + Σ_{τᵢ < t} K(τᵢ) g(t − τᵢ)`.

use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::kernel::TriggeringKernel;

/// Constant-productivity Hawkes parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HawkesParams {
    pub mu: f64,
    pub k: f64,
    pub kernel: TriggeringKernel,
}

impl HawkesParams {
    pub fn new(mu: f64, k: f64, kernel: TriggeringKernel) -> Result<Self> {
        let p = Self { mu, k, kernel };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "background rate must be positive, got {}",
                self.mu
            )));
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "productivity must be nonnegative, got {}",
                self.k
            )));
        }
        self.kernel.validate()
    }

    /// `K >= 1`: the branching process is critical or supercritical.
    pub fn is_nonstationary(&self) -> bool {
        self.k >= 1.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineFlags {
    pub raw: bool,
    pub truncated: bool,
    pub rescaled: bool,
    pub smoothed: bool,
}

/// Per-event productivity estimates `K̂(τ₁), …, K̂(τₙ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductivityEstimate {
    pub values: Vec<f64>,
    pub flags: PipelineFlags,
    pub bandwidth: Option<f64>,
}

impl ProductivityEstimate {
    pub fn raw(values: Vec<f64>) -> Self {
        Self {
            values,
            flags: PipelineFlags {
                raw: true,
                ..Default::default()
            },
            bandwidth: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `λ(t)` for per-event productivities `k` aligned with `catalog`.
pub fn conditional_intensity(
    catalog: &EventCatalog,
    mu: f64,
    kernel: &TriggeringKernel,
    k: &[f64],
    t: f64,
) -> Result<f64> {
    check_aligned(catalog, k)?;
    let times = catalog.times();
    let end = times.partition_point(|&s| s < t);
    Ok(mu
        + times[..end]
            .iter()
            .zip(k)
            .map(|(&s, &ki)| ki * kernel.eval(t - s))
            .sum::<f64>())
}

pub(crate) fn check_aligned(catalog: &EventCatalog, k: &[f64]) -> Result<()> {
    if k.len() != catalog.len() {
        return Err(Error::LengthMismatch {
            expected: catalog.len(),
            got: k.len(),
        });
    }
    Ok(())
}

/// Conditional intensity of a fitted or simulated model, evaluable anywhere
/// on the window.
#[derive(Debug, Clone)]
pub struct Intensity<'a> {
    times: &'a [f64],
    k: &'a [f64],
    mu: f64,
    kernel: TriggeringKernel,
}

impl<'a> Intensity<'a> {
    pub fn new(
        catalog: &'a EventCatalog,
        mu: f64,
        kernel: TriggeringKernel,
        k: &'a [f64],
    ) -> Result<Self> {
        check_aligned(catalog, k)?;
        Ok(Self {
            times: catalog.times(),
            k,
            mu,
            kernel,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `λ(t)`, counting only events strictly before `t`.
    pub fn at(&self, t: f64) -> f64 {
        let end = self.times.partition_point(|&s| s < t);
        self.mu
            + self.times[..end]
                .iter()
                .zip(self.k)
                .map(|(&s, &ki)| ki * self.kernel.eval(t - s))
                .sum::<f64>()
    }

    /// `λ` at each of the ascending points `ts`. Linear time for the
    /// exponential kernel.
    pub fn at_sorted(&self, ts: &[f64]) -> Vec<f64> {
        debug_assert!(ts.windows(2).all(|w| w[0] <= w[1]));
        match self.kernel {
            TriggeringKernel::Exponential { beta } => {
                // excitation carried forward from the last absorbed event
                let mut out = Vec::with_capacity(ts.len());
                let mut state = 0.0;
                let mut state_time = 0.0;
                let mut next = 0;
                for &t in ts {
                    while next < self.times.len() && self.times[next] < t {
                        let s = self.times[next];
                        state = state * (-beta * (s - state_time)).exp() + self.k[next] * beta;
                        state_time = s;
                        next += 1;
                    }
                    let excitation = if next == 0 {
                        0.0
                    } else {
                        state * (-beta * (t - state_time)).exp()
                    };
                    out.push(self.mu + excitation);
                }
                out
            }
            _ => ts.iter().map(|&t| self.at(t)).collect(),
        }
    }

    /// `λ(τⱼ)` at every event of the catalog.
    pub fn at_events(&self) -> Vec<f64> {
        self.at_sorted(self.times)
    }

    /// `∫₀ᵀ λ(s) ds` with exact kernel tail masses.
    pub fn compensator(&self, window_end: f64) -> f64 {
        self.mu * window_end
            + self
                .times
                .iter()
                .zip(self.k)
                .map(|(&s, &ki)| ki * self.kernel.tail_integral(window_end - s))
                .sum::<f64>()
    }
}
