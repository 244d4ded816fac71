//! Point-process log-likelihood `ℓ = Σ log λ(τᵢ) − ∫₀ᵀ λ(s) ds`.

use crate::catalog::EventCatalog;
use crate::error::Result;
use crate::kernel::TriggeringKernel;
use crate::model::Intensity;

#[derive(Debug, Clone, Copy)]
pub enum Productivity<'a> {
    Constant(f64),
    PerEvent(&'a [f64]),
}

/// How the triggered part of the compensator is integrated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Compensator {
    /// Each event contributes `K ∫₀^{T−τ} g`.
    #[default]
    Exact,
    /// Each event contributes its full productivity `K`, the large-`T`
    /// form whose stationarity conditions are the closed-form score
    /// equations.
    Untruncated,
}

/// Log-likelihood, or `-∞` if the intensity is nonpositive at some event.
pub fn log_likelihood(
    catalog: &EventCatalog,
    mu: f64,
    kernel: &TriggeringKernel,
    productivity: Productivity<'_>,
    compensator: Compensator,
) -> Result<f64> {
    let owned;
    let k: &[f64] = match productivity {
        Productivity::Constant(k) => {
            owned = vec![k; catalog.len()];
            &owned
        }
        Productivity::PerEvent(k) => k,
    };
    let lam = Intensity::new(catalog, mu, *kernel, k)?;
    let mut sum_log = 0.0;
    for (i, l) in lam.at_events().into_iter().enumerate() {
        if !(l > 0.0) {
            log::debug!("nonpositive intensity {l} at event {i}");
            return Ok(f64::NEG_INFINITY);
        }
        sum_log += l.ln();
    }
    let integral = match compensator {
        Compensator::Exact => lam.compensator(catalog.window_end()),
        Compensator::Untruncated => mu * catalog.window_end() + k.iter().sum::<f64>(),
    };
    Ok(sum_log - integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn poisson_likelihood() {
        let c = EventCatalog::new(vec![0.5, 1.5, 4.0], 10.0).unwrap();
        let k = TriggeringKernel::exponential(0.7).unwrap();
        let l = log_likelihood(&c, 0.3, &k, Productivity::Constant(0.0), Compensator::Exact).unwrap();
        assert_abs_diff_eq!(l, 3.0 * 0.3f64.ln() - 3.0, epsilon = 1e-12);
    }

    #[test]
    fn compensator_matches_quadrature() {
        let c = EventCatalog::new(vec![0.4, 1.1, 1.3], 3.0).unwrap();
        let ks = [0.8, 0.3, 1.1];
        for kernel in [
            TriggeringKernel::exponential(1.7).unwrap(),
            TriggeringKernel::etas_power_law(0.05, 1.6, 0.0, 0.0).unwrap(),
        ] {
            let mu = 0.6;
            let ll = log_likelihood(&c, mu, &kernel, Productivity::PerEvent(&ks), Compensator::Exact)
                .unwrap();
            // composite Simpson on each inter-event segment, where λ is smooth
            let lam = |t: f64| {
                mu + c
                    .times()
                    .iter()
                    .zip(&ks)
                    .filter(|(s, _)| **s < t)
                    .map(|(s, k)| k * kernel.eval(t - s))
                    .sum::<f64>()
            };
            let mut knots = vec![0.0];
            knots.extend_from_slice(c.times());
            knots.push(3.0);
            let mut integral = 0.0;
            for w in knots.windows(2) {
                let (a, b) = (w[0], w[1]);
                let m = 20_000;
                let h = (b - a) / m as f64;
                let eps = 1e-13;
                let f = |x: f64| lam(x.clamp(a + eps, b));
                let mut s = f(a) + f(b);
                for i in 1..m {
                    s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
                }
                integral += s * h / 3.0;
            }
            let sum_log: f64 = c.times().iter().map(|&t| lam(t).ln()).sum();
            assert_abs_diff_eq!(ll, sum_log - integral, epsilon = 1e-6);
        }
    }

    #[test]
    fn negative_intensity_sentinel() {
        let c = EventCatalog::new(vec![1.0, 2.0], 3.0).unwrap();
        let k = TriggeringKernel::exponential(1.0).unwrap();
        let l = log_likelihood(&c, 0.1, &k, Productivity::PerEvent(&[-5.0, 0.0]), Compensator::Exact)
            .unwrap();
        assert_eq!(l, f64::NEG_INFINITY);
    }

    #[test]
    fn untruncated_differs_by_tail_mass() {
        let c = EventCatalog::new(vec![1.0, 2.0], 3.0).unwrap();
        let k = TriggeringKernel::exponential(1.0).unwrap();
        let ks = [0.5, 0.25];
        let a = log_likelihood(&c, 0.1, &k, Productivity::PerEvent(&ks), Compensator::Exact).unwrap();
        let b = log_likelihood(&c, 0.1, &k, Productivity::PerEvent(&ks), Compensator::Untruncated)
            .unwrap();
        let missing = 0.5 * (-2.0f64).exp() + 0.25 * (-1.0f64).exp();
        assert_abs_diff_eq!(a - b, missing, epsilon = 1e-12);
    }
}
