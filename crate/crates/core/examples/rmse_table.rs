// Reproduces the RMSE comparison across productivity shapes.
//
// ```text
// cargo run --release --example rmse_table -- [replicates] [seed]
// ```

use vphawkes::experiments::{check_against_paper, run_scenario, ExperimentConfig, Scenario};

fn main() -> vphawkes::Result<()> {
    let mut args = std::env::args().skip(1);
    let replicates = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok());

    println!(
        "{:<12} {:>20} {:>20} {:>20} {:>8}",
        "scenario", "unscaled empirical", "closed-form MLE", "scaled empirical", "singular"
    );
    for scenario in Scenario::TIME_VARYING {
        let mut cfg = ExperimentConfig::new(scenario).with_replicates(replicates);
        if let Some(s) = seed {
            cfg = cfg.with_seed(s);
        }
        let s = run_scenario(&cfg)?;
        println!(
            "{:<12} {:>20} {:>20} {:>20} {:>8}",
            scenario,
            s.unscaled_empirical.to_string(),
            s.mle_pipeline.to_string(),
            s.scaled_empirical.to_string(),
            s.singular_failures
        );
        println!(
            "{:<12} {:>20} {:>20} (raw MLE {:.3}, truncated+smoothed {:.4})",
            "", "", "", s.mle_raw.mean, s.mle_truncated_smoothed.mean
        );
        for c in check_against_paper(&s) {
            if !c.passed {
                println!("    off target: {} ({:.4} vs {:.4})", c.label, c.value, c.target);
            }
        }
    }
    Ok(())
}
