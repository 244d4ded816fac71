//! Constant-productivity Hawkes MLE for the exponential kernel, used to
//! obtain `μ` and `g` before estimating per-event productivities.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::kernel::TriggeringKernel;
use crate::model::HawkesParams;
use crate::optim::{nelder_mead_restarts, NelderMeadOptions};

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub simplex: NelderMeadOptions,
    pub restarts: usize,
    /// Relative step for the finite-difference Hessian.
    pub hessian_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            simplex: NelderMeadOptions {
                max_iter: 4000,
                f_tol: 1e-12,
                x_tol: 1e-7,
                initial_step: 0.3,
            },
            restarts: 4,
            hessian_step: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    pub mu: f64,
    pub k: f64,
    pub beta: f64,
}

impl ParamTriple {
    fn as_array(&self) -> [f64; 3] {
        [self.mu, self.k, self.beta]
    }

    fn from_array(a: [f64; 3]) -> Self {
        Self {
            mu: a[0],
            k: a[1],
            beta: a[2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub estimate: ParamTriple,
    /// Square roots of the diagonal of the inverse observed information;
    /// NaN where the Hessian is not negative definite.
    pub standard_errors: ParamTriple,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    pub fn params(&self) -> Result<HawkesParams> {
        HawkesParams::new(
            self.estimate.mu,
            self.estimate.k,
            TriggeringKernel::exponential(self.estimate.beta)?,
        )
    }
}

/// Exact log-likelihood of `μ + K Σ β e^{−β(t−τᵢ)}` in linear time.
pub fn constant_exponential_log_likelihood(times: &[f64], window_end: f64, theta: [f64; 3]) -> f64 {
    let [mu, k, beta] = theta;
    if !(mu > 0.0 && k >= 0.0 && beta > 0.0) {
        return f64::NEG_INFINITY;
    }
    let mut decayed = 0.0;
    let mut last = 0.0;
    let mut sum_log = 0.0;
    let mut tail = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            decayed = (decayed + 1.0) * (-beta * (t - last)).exp();
        }
        last = t;
        sum_log += (mu + k * beta * decayed).ln();
        tail += -(-beta * (window_end - t)).exp_m1();
    }
    sum_log - mu * window_end - k * tail
}

pub fn fit_constant_hawkes(
    catalog: &EventCatalog,
    init: &HawkesParams,
    opts: &FitOptions,
) -> Result<FitResult> {
    if catalog.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "fitting needs at least 2 events, got {}",
            catalog.len()
        )));
    }
    let beta0 = match init.kernel {
        TriggeringKernel::Exponential { beta } => beta,
        _ => {
            return Err(Error::InvalidParameter(
                "constant-productivity fitting supports the exponential kernel only".into(),
            ))
        }
    };
    let times = catalog.times();
    let t_end = catalog.window_end();
    let ll = |theta: [f64; 3]| constant_exponential_log_likelihood(times, t_end, theta);

    // positivity through log parameters; K starts away from the boundary
    let start = [
        init.mu.max(1e-8).ln(),
        init.k.max(1e-3).ln(),
        beta0.ln(),
    ];
    let min = nelder_mead_restarts(
        |phi: &[f64]| -ll([phi[0].exp(), phi[1].exp(), phi[2].exp()]),
        &start,
        &opts.simplex,
        opts.restarts,
    );
    let theta = [min.x[0].exp(), min.x[1].exp(), min.x[2].exp()];
    let log_likelihood = ll(theta);
    if !min.converged {
        log::warn!("constant Hawkes fit did not converge after {} iterations", min.iterations);
    }

    let standard_errors = hessian_standard_errors(&ll, theta, opts.hessian_step);
    Ok(FitResult {
        estimate: ParamTriple::from_array(theta),
        standard_errors: ParamTriple::from_array(standard_errors),
        log_likelihood,
        converged: min.converged,
        iterations: min.iterations,
    })
}

/// Central-difference Hessian of `f` at `x`, with per-coordinate steps
/// `rel · |xᵢ|` (pulled back inside the positive orthant when needed).
pub fn finite_difference_hessian<F: Fn([f64; 3]) -> f64>(f: &F, x: [f64; 3], rel: f64) -> Matrix3<f64> {
    let h: Vec<f64> = x.iter().map(|v| rel * v.abs().max(1e-6)).collect();
    let shifted = |di: usize, si: f64, dj: usize, sj: f64| {
        let mut y = x;
        y[di] += si * h[di];
        y[dj] += sj * h[dj];
        f(y)
    };
    let f0 = f(x);
    let mut hess = Matrix3::zeros();
    for i in 0..3 {
        let fp = shifted(i, 1.0, i, 0.0);
        let fm = shifted(i, -1.0, i, 0.0);
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in i + 1..3 {
            let v = (shifted(i, 1.0, j, 1.0) - shifted(i, 1.0, j, -1.0) - shifted(i, -1.0, j, 1.0)
                + shifted(i, -1.0, j, -1.0))
                / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

fn hessian_standard_errors<F: Fn([f64; 3]) -> f64>(f: &F, x: [f64; 3], rel: f64) -> [f64; 3] {
    let info = -finite_difference_hessian(f, x, rel);
    match info.try_inverse() {
        Some(cov) => {
            let mut se = [f64::NAN; 3];
            for (i, s) in se.iter_mut().enumerate() {
                let v = cov[(i, i)];
                if v.is_finite() && v >= 0.0 {
                    *s = v.sqrt();
                }
            }
            se
        }
        None => [f64::NAN; 3],
    }
}

impl From<ParamTriple> for [f64; 3] {
    fn from(p: ParamTriple) -> Self {
        p.as_array()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::likelihood::{log_likelihood, Compensator, Productivity};
    use approx::assert_abs_diff_eq;

    #[test]
    fn fast_likelihood_matches_generic() {
        let c = EventCatalog::new(vec![0.3, 0.5, 1.9, 2.0, 4.4], 6.0).unwrap();
        let kern = TriggeringKernel::exponential(1.3).unwrap();
        let generic =
            log_likelihood(&c, 0.4, &kern, Productivity::Constant(0.6), Compensator::Exact).unwrap();
        let fast = constant_exponential_log_likelihood(c.times(), 6.0, [0.4, 0.6, 1.3]);
        assert_abs_diff_eq!(generic, fast, epsilon = 1e-12);
    }

    #[test]
    fn hessian_of_quadratic() {
        let f = |x: [f64; 3]| -(x[0] - 1.0).powi(2) - 3.0 * x[1] * x[1] + x[0] * x[2] - x[2] * x[2];
        let h = finite_difference_hessian(&f, [1.0, 2.0, 3.0], 1e-4);
        let expect = Matrix3::new(-2.0, 0.0, 1.0, 0.0, -6.0, 0.0, 1.0, 0.0, -2.0);
        assert!((h - expect).abs().max() < 1e-5, "{h}");
    }

    #[test]
    fn rejects_power_law_init() {
        let c = EventCatalog::new(vec![0.3, 0.5], 6.0).unwrap();
        let p = HawkesParams::new(0.5, 0.5, TriggeringKernel::etas_power_law(0.1, 1.5, 0.0, 0.0).unwrap())
            .unwrap();
        assert!(fit_constant_hawkes(&c, &p, &FitOptions::default()).is_err());
    }
}
