// Branching simulation of time-varying, renewal and magnitude-dependent
// productivity.

use vphawkes::experiments::Scenario;
use vphawkes::simulate::simulate_variable_hawkes;

pub fn run_example() -> vphawkes::Result<()> {
    for scenario in [Scenario::Normals, Scenario::Renewal, Scenario::Etas] {
        let sim = simulate_variable_hawkes(&scenario.simulation(1000.0), 11)?;
        let offspring: usize = sim.offspring_counts().iter().sum();
        let total_k: f64 = sim.productivity.iter().sum();
        println!(
            "{scenario:<10} n = {:>4}  background = {:>4}  offspring = {:>4}  ΣK = {total_k:.1}",
            sim.n(),
            sim.background_count(),
            offspring
        );
        assert_eq!(sim.background_count() + offspring, sim.n());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
