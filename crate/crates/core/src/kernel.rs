//! Normalized triggering densities `g` on `[0, ∞)`.
//!
//! Both variants integrate to one. For the ETAS power law the magnitude
//! factor `exp(a (m - M0))` is not part of `g`; it is folded into each
//! event's productivity (see [`TriggeringKernel::magnitude_factor`]).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TriggeringKernel {
    /// `g(u) = β exp(-β u)`.
    Exponential { beta: f64 },
    /// `g(u) = (ρ-1) c^(ρ-1) (u + c)^(-ρ)`; `a` and `m0` describe the
    /// magnitude dependence of productivity.
    EtasPowerLaw { c: f64, rho: f64, a: f64, m0: f64 },
}

impl TriggeringKernel {
    pub fn exponential(beta: f64) -> Result<Self> {
        let k = TriggeringKernel::Exponential { beta };
        k.validate()?;
        Ok(k)
    }

    pub fn etas_power_law(c: f64, rho: f64, a: f64, m0: f64) -> Result<Self> {
        let k = TriggeringKernel::EtasPowerLaw { c, rho, a, m0 };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TriggeringKernel::Exponential { beta } => {
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "exponential rate must be positive, got {beta}"
                    )));
                }
            }
            TriggeringKernel::EtasPowerLaw { c, rho, a, m0 } => {
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "power-law offset c must be positive, got {c}"
                    )));
                }
                if !(rho.is_finite() && rho > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "power-law exponent must exceed 1 for a normalized density, got {rho}"
                    )));
                }
                if !a.is_finite() || !m0.is_finite() {
                    return Err(Error::InvalidParameter(
                        "magnitude parameters must be finite".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Density `g(u)`; zero for negative lags.
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        match *self {
            TriggeringKernel::Exponential { beta } => beta * (-beta * u).exp(),
            TriggeringKernel::EtasPowerLaw { c, rho, .. } => {
                (rho - 1.0) * c.powf(rho - 1.0) * (u + c).powf(-rho)
            }
        }
    }

    /// Probability mass `∫₀ᵘ g(t) dt`.
    #[inline]
    pub fn tail_integral(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u == f64::INFINITY {
            return 1.0;
        }
        match *self {
            TriggeringKernel::Exponential { beta } => -(-beta * u).exp_m1(),
            TriggeringKernel::EtasPowerLaw { c, rho, .. } => {
                // 1 - (c / (u + c))^(ρ-1), written to avoid cancellation for small u
                -((rho - 1.0) * (-(u / (u + c))).ln_1p()).exp_m1()
            }
        }
    }

    /// Inverse of [`tail_integral`](Self::tail_integral) for `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            TriggeringKernel::Exponential { beta } => -(-p).ln_1p() / beta,
            TriggeringKernel::EtasPowerLaw { c, rho, .. } => {
                c * ((-(-p).ln_1p() / (rho - 1.0)).exp_m1())
            }
        }
    }

    /// Draws a lag from `g` restricted to `[0, upper]`.
    pub fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R, upper: f64) -> f64 {
        let mass = self.tail_integral(upper);
        let p = rng.random::<f64>() * mass;
        self.quantile(p).min(upper)
    }

    /// `exp(a (m - M0))` for the power-law variant, 1 otherwise.
    pub fn magnitude_factor(&self, m: f64) -> f64 {
        match *self {
            TriggeringKernel::Exponential { .. } => 1.0,
            TriggeringKernel::EtasPowerLaw { a, m0, .. } => (a * (m - m0)).exp(),
        }
    }

    /// Returns the kernel with time rescaled by `factor` (`t -> factor·t`).
    pub fn time_rescaled(&self, factor: f64) -> Self {
        match *self {
            TriggeringKernel::Exponential { beta } => TriggeringKernel::Exponential {
                beta: beta / factor,
            },
            TriggeringKernel::EtasPowerLaw { c, rho, a, m0 } => TriggeringKernel::EtasPowerLaw {
                c: c * factor,
                rho,
                a,
                m0,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kernels() -> Vec<TriggeringKernel> {
        vec![
            TriggeringKernel::exponential(0.7).unwrap(),
            TriggeringKernel::exponential(2.7).unwrap(),
            TriggeringKernel::etas_power_law(0.01, 1.3, 1.2, 3.5).unwrap(),
            TriggeringKernel::etas_power_law(0.5, 2.5, 0.0, 0.0).unwrap(),
        ]
    }

    #[test]
    fn exponential_values() {
        let k = TriggeringKernel::exponential(0.7).unwrap();
        assert_eq!(k.eval(0.0), 0.7);
        let k1 = TriggeringKernel::exponential(1.0).unwrap();
        assert_abs_diff_eq!(k1.eval(1.0), 0.367879, epsilon = 1e-6);
        assert_abs_diff_eq!(k1.tail_integral(1.0), 0.632121, epsilon = 1e-6);
        assert_eq!(k1.tail_integral(0.0), 0.0);
        assert_eq!(k.tail_integral(f64::INFINITY), 1.0);
    }

    #[test]
    fn causal() {
        for k in kernels() {
            assert_eq!(k.eval(-1.0), 0.0);
            assert_eq!(k.tail_integral(-1.0), 0.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TriggeringKernel::exponential(0.0).is_err());
        assert!(TriggeringKernel::exponential(-1.0).is_err());
        assert!(TriggeringKernel::etas_power_law(0.01, 1.0, 1.0, 3.0).is_err());
        assert!(TriggeringKernel::etas_power_law(0.0, 1.5, 1.0, 3.0).is_err());
    }

    #[test]
    fn tail_integral_is_antiderivative() {
        for k in kernels() {
            let h = 1e-5;
            let mut u = 0.01;
            while u < 20.0 {
                let fd = (k.tail_integral(u + h) - k.tail_integral(u - h)) / (2.0 * h);
                assert!(
                    (fd - k.eval(u)).abs() < 1e-6 * k.eval(u).max(1.0),
                    "{k:?} at {u}: {fd} vs {}",
                    k.eval(u)
                );
                u *= 1.3;
            }
        }
    }

    #[test]
    fn power_law_normalized() {
        let k = TriggeringKernel::etas_power_law(0.5, 2.5, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(k.tail_integral(1e12), 1.0, epsilon = 1e-9);
        // midpoint quadrature on a log grid as an independent check
        let mut total = 0.0;
        let mut a = 0.0;
        let mut step = 1e-4;
        while a < 1e6 {
            total += k.eval(a + step / 2.0) * step;
            a += step;
            step *= 1.001;
        }
        assert_abs_diff_eq!(total, k.tail_integral(a), epsilon = 1e-5);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for k in kernels() {
            for &p in &[0.0, 0.1, 0.5, 0.9, 0.999] {
                assert_abs_diff_eq!(k.tail_integral(k.quantile(p)), p, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn truncated_samples_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in kernels() {
            for _ in 0..1000 {
                let u = k.sample_truncated(&mut rng, 0.3);
                assert!((0.0..=0.3).contains(&u));
            }
        }
    }
}
