// The closed-form productivity MLE on three events, checked against the
// score equations.

use vphawkes::estimate::{mle_productivities, score_residual, SolveOptions};
use vphawkes::{EventCatalog, TriggeringKernel};

pub fn run_example() -> vphawkes::Result<()> {
    let catalog = EventCatalog::new(vec![1.0, 2.0, 3.0], 4.0)?;
    let kernel = TriggeringKernel::exponential(1.0)?;
    let mu = 0.5;

    let sol = mle_productivities(&catalog, mu, &kernel, &SolveOptions::default())?;
    println!("λ̂ at events 2..n: {:?}", sol.intensities);
    println!("K̂: {:?}", sol.estimate.values);

    let residual = score_residual(&catalog, mu, &kernel, &sol.estimate.values)?;
    let worst = residual.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    println!("largest score-equation residual: {worst:.2e}");
    assert!(worst < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
