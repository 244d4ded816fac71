// How errors in the intensities at the events propagate into the
// recovered productivities.

use vphawkes::experiments::{noise_catalog, run_noise_sensitivity, sigma_grid, NoiseDraws, SCENARIO_BETA, SCENARIO_MU};
use vphawkes::TriggeringKernel;

pub fn run_example() -> vphawkes::Result<()> {
    let sim = noise_catalog()?;
    let kernel = TriggeringKernel::exponential(SCENARIO_BETA)?;
    let study = run_noise_sensitivity(&sim, SCENARIO_MU, &kernel, &sigma_grid(0.001, 20), NoiseDraws::Common, 1)?;
    println!("{} events", study.n);
    println!("{:>10} {:>12} {:>12}", "sigma", "λ RMSE", "K RMSE");
    for r in &study.rows {
        println!("{:>10.6} {:>12.3e} {:>12.3e}", r.sigma, r.lambda_rmse, r.k_rmse);
    }
    println!("Spearman(λ error, K error) = {:.3}", study.spearman());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
