//! The upper-triangular triggering matrix `G[i,j] = g(τ_{j+1} − τ_i)` and
//! its two triangular solves. No inverse is ever formed.

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::kernel::TriggeringKernel;

/// Condition estimates above this trigger a warning.
pub const ILL_CONDITIONED: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Diagonal entries at or below this are treated as singular.
    pub pivot_tolerance: f64,
    /// Added to every diagonal entry before solving; 0 disables.
    pub ridge: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            pivot_tolerance: 1e-12,
            ridge: 0.0,
        }
    }
}

/// Packed upper triangle of `G`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct TriggeringMatrix {
    dim: usize,
    packed: Vec<f64>,
}

impl TriggeringMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn row_start(&self, i: usize) -> usize {
        // rows 0..i hold dim + (dim-1) + ... + (dim-i+1) entries
        i * self.dim - i * (i.saturating_sub(1)) / 2
    }

    /// Row `i` restricted to columns `i..dim`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let s = self.row_start(i);
        &self.packed[s..s + (self.dim - i)]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > j {
            0.0
        } else {
            self.row(i)[j - i]
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row(i)[0]).collect()
    }

    /// `G x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(&x[i..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Gᵀ x`.
    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            for (o, a) in out[i..].iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    /// Row-major dense copy, mainly for cross-checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn from_upper_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        let mut packed = Vec::with_capacity(dim * (dim + 1) / 2);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != dim - i {
                return Err(Error::LengthMismatch {
                    expected: dim - i,
                    got: r.len(),
                });
            }
            packed.extend(r);
        }
        Ok(Self { dim, packed })
    }

    /// `max|G[i,i]| / min|G[i,i]|`, a lower bound on the condition number of
    /// a triangular matrix.
    pub fn condition_estimate(&self, ridge: f64) -> f64 {
        let (lo, hi) = (0..self.dim)
            .map(|i| (self.row(i)[0] + ridge).abs())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if self.dim == 0 {
            1.0
        } else {
            hi / lo
        }
    }

    fn checked_pivots(&self, opts: &SolveOptions) -> Result<Vec<f64>> {
        let mut pivots = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let d = self.row(i)[0] + opts.ridge;
            if !(d.is_finite() && d > opts.pivot_tolerance) {
                return Err(Error::SingularMatrix { index: i, value: d });
            }
            pivots.push(d);
        }
        let cond = self.condition_estimate(opts.ridge);
        if cond > ILL_CONDITIONED {
            log::warn!("triggering matrix is ill-conditioned (diagonal ratio {cond:.3e})");
        }
        Ok(pivots)
    }

    /// Back substitution for `(G + εI) x = b`.
    pub fn solve_upper(&self, b: &[f64], opts: &SolveOptions) -> Result<Vec<f64>> {
        check_len(self.dim, b.len())?;
        let pivots = self.checked_pivots(opts)?;
        let mut x = vec![0.0; self.dim];
        for i in (0..self.dim).rev() {
            let row = self.row(i);
            let s: f64 = row[1..].iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (b[i] - s) / pivots[i];
        }
        Ok(x)
    }

    /// Forward substitution for `(G + εI)ᵀ x = b`, column oriented so that
    /// rows of `G` are read contiguously.
    pub fn solve_lower_transpose(&self, b: &[f64], opts: &SolveOptions) -> Result<Vec<f64>> {
        check_len(self.dim, b.len())?;
        let pivots = self.checked_pivots(opts)?;
        let mut r = b.to_vec();
        let mut x = vec![0.0; self.dim];
        for j in 0..self.dim {
            x[j] = r[j] / pivots[j];
            let row = self.row(j);
            for (rk, a) in r[j + 1..].iter_mut().zip(&row[1..]) {
                *rk -= a * x[j];
            }
        }
        Ok(x)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

/// Builds `G` for a catalog with at least two events.
pub fn build_triggering_matrix(
    catalog: &EventCatalog,
    kernel: &TriggeringKernel,
) -> Result<TriggeringMatrix> {
    let t = catalog.times();
    if t.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "triggering matrix needs at least 2 events, got {}",
            t.len()
        )));
    }
    if let Some(i) = t.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::NonIncreasingTimes { index: i + 1 });
    }
    let dim = t.len() - 1;
    let mut packed = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in 0..dim {
        packed.extend(t[i + 1..].iter().map(|&tj| kernel.eval(tj - t[i])));
    }
    Ok(TriggeringMatrix { dim, packed })
}

/// Solves `G (1/λ) = 1` for the inverse intensities at `τ₂, …, τₙ`.
pub fn solve_inverse_intensities(g: &TriggeringMatrix, opts: &SolveOptions) -> Result<Vec<f64>> {
    g.solve_upper(&vec![1.0; g.dim()], opts)
}
