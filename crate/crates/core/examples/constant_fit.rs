// Maximum-likelihood fit of an ordinary Hawkes process with standard
// errors from the observed information.

use vphawkes::estimate::{fit_constant_hawkes, FitOptions};
use vphawkes::simulate::{simulate_variable_hawkes, ProductivitySpec, SimulationConfig};
use vphawkes::{HawkesParams, TriggeringKernel};

pub fn run_example() -> vphawkes::Result<()> {
    let kernel = TriggeringKernel::exponential(0.7)?;
    let cfg = SimulationConfig::new(0.5, kernel, ProductivitySpec::Constant(0.5), 2000.0);
    let sim = simulate_variable_hawkes(&cfg, 8)?;

    let init = HawkesParams::new(0.3, 0.3, TriggeringKernel::exponential(1.0)?)?;
    let fit = fit_constant_hawkes(&sim.catalog, &init, &FitOptions::default())?;
    let (e, se) = (fit.estimate, fit.standard_errors);
    println!("n = {}, log-likelihood {:.3}", sim.n(), fit.log_likelihood);
    println!("μ = {:.4} ± {:.4}  (true 0.5)", e.mu, 1.96 * se.mu);
    println!("K = {:.4} ± {:.4}  (true 0.5)", e.k, 1.96 * se.k);
    println!("β = {:.4} ± {:.4}  (true 0.7)", e.beta, 1.96 * se.beta);
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
