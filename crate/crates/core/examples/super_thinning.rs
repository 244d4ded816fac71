// Goodness of fit by super-thinning: the true model passes, a model that
// ignores self-excitation does not.

use vphawkes::diagnostics::{ks_uniformity, normalized_cumsum, super_thin, uniformity_band, BandMethod};
use vphawkes::simulate::{simulate_variable_hawkes, ProductivitySpec, SimulationConfig};
use vphawkes::{Intensity, TriggeringKernel};

pub fn run_example() -> vphawkes::Result<()> {
    let kernel = TriggeringKernel::exponential(0.7)?;
    let cfg = SimulationConfig::new(0.5, kernel, ProductivitySpec::Constant(0.5), 1000.0);
    let sim = simulate_variable_hawkes(&cfg, 21)?;
    let b = sim.catalog.mean_rate();

    for (label, mu, k) in [("true model", 0.5, 0.5), ("Poisson model", b, 0.0)] {
        let ks_per_event = vec![k; sim.n()];
        let lambda = Intensity::new(&sim.catalog, mu, kernel, &ks_per_event)?;
        let thin = super_thin(&sim.catalog, &lambda, b, 5)?;
        let ks = ks_uniformity(&thin.standardized_u);
        let band = uniformity_band(thin.len(), 500, 0.95, BandMethod::Simultaneous, 6)?;
        let inside = band.contains(&normalized_cumsum(&thin.standardized_u));
        println!(
            "{label:<14} {} residual points, KS p = {:.4}, cumulative sum inside band: {inside}",
            thin.len(),
            ks.p_value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
