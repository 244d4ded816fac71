// Productivity as a function of magnitude recovered from the timing of
// simulated ETAS catalogs alone.
//
// ```text
// cargo run --release --example etas_magnitude -- [replicates]
// ```

use vphawkes::experiments::{run_etas_magnitude, EtasStudyConfig};

fn main() -> vphawkes::Result<()> {
    let replicates = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let cfg = EtasStudyConfig {
        replicates,
        ..EtasStudyConfig::default()
    };
    let study = run_etas_magnitude(&cfg)?;
    println!("{:>9} {:>9} {:>9} {:>9}", "magnitude", "true", "MLE", "empirical");
    for j in (0..study.grid.len()).step_by(4) {
        println!(
            "{:>9.2} {:>9.3} {:>9.3} {:>9.3}",
            study.grid[j], study.true_curve[j], study.mle_mean_curve[j], study.empirical_mean_curve[j]
        );
    }
    println!(
        "mean RMSE: MLE {:.3}, empirical {:.3} ({} singular)",
        study.mean_mle_rmse(),
        study.mean_empirical_rmse(),
        study.singular_failures
    );
    Ok(())
}
