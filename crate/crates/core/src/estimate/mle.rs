//! Closed-form maximum-likelihood productivities.
//!
//! Setting `∂ℓ/∂K(τᵢ) = 0` gives `G (1/λ) = 1`, an upper-triangular system
//! in the inverse intensities at `τ₂..τₙ`. The intensities then satisfy
//! `λ = μ + Gᵀ K`, a lower-triangular system in `K(τ₁)..K(τₙ₋₁)`. The last
//! event has no observed offspring window and its estimate is 0.

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::kernel::TriggeringKernel;
use crate::model::{Intensity, ProductivityEstimate};

use super::matrix::{build_triggering_matrix, solve_inverse_intensities, SolveOptions, TriggeringMatrix};

#[derive(Debug, Clone)]
pub struct MleSolution {
    pub estimate: ProductivityEstimate,
    /// `λ̂(τ₂), …, λ̂(τₙ)`; components may be nonpositive.
    pub intensities: Vec<f64>,
    /// `G⁻¹ 1`.
    pub inverse_intensities: Vec<f64>,
    pub condition_estimate: f64,
}

/// Raw per-event MLE `K̂ = (Gᵀ)⁻¹[1/(G⁻¹1) − μ]`, `K̂(τₙ) = 0`.
pub fn mle_productivities(
    catalog: &EventCatalog,
    mu: f64,
    kernel: &TriggeringKernel,
    opts: &SolveOptions,
) -> Result<MleSolution> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "background rate must be positive, got {mu}"
        )));
    }
    let g = build_triggering_matrix(catalog, kernel)?;
    mle_from_matrix(&g, mu, opts)
}

pub fn mle_from_matrix(g: &TriggeringMatrix, mu: f64, opts: &SolveOptions) -> Result<MleSolution> {
    let inverse_intensities = solve_inverse_intensities(g, opts)?;
    let intensities: Vec<f64> = inverse_intensities.iter().map(|x| 1.0 / x).collect();
    let mut values = productivities_from_intensities(g, &intensities, mu, opts)?;
    values.push(0.0);
    Ok(MleSolution {
        estimate: ProductivityEstimate::raw(values),
        intensities,
        inverse_intensities,
        condition_estimate: g.condition_estimate(opts.ridge),
    })
}

/// Solves `λ = μ + Gᵀ K` for `K(τ₁), …, K(τₙ₋₁)` given intensities at
/// `τ₂, …, τₙ`.
pub fn productivities_from_intensities(
    g: &TriggeringMatrix,
    intensities: &[f64],
    mu: f64,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let rhs: Vec<f64> = intensities.iter().map(|l| l - mu).collect();
    g.solve_lower_transpose(&rhs, opts)
}

/// Score residuals `Σ_{j>i} g(τⱼ − τᵢ)/λ(τⱼ) − 1` for `i = 1..n−1`, with `λ`
/// rebuilt from `k` directly.
pub fn score_residual(
    catalog: &EventCatalog,
    mu: f64,
    kernel: &TriggeringKernel,
    k: &[f64],
) -> Result<Vec<f64>> {
    let lam = Intensity::new(catalog, mu, *kernel, k)?.at_events();
    if let Some((index, &value)) = lam.iter().enumerate().skip(1).find(|(_, &l)| l <= 0.0) {
        return Err(Error::NonPositiveIntensity { index, value });
    }
    let t = catalog.times();
    let n = t.len();
    Ok((0..n.saturating_sub(1))
        .map(|i| {
            (i + 1..n)
                .map(|j| kernel.eval(t[j] - t[i]) / lam[j])
                .sum::<f64>()
                - 1.0
        })
        .collect())
}
