use proptest::prelude::*;
use vphawkes::experiments::{etas_study_config, Scenario};
use vphawkes::simulate::{
    simulate_etas, simulate_poisson, simulate_variable_hawkes, EtasConfig, ProductivitySpec, SimulationConfig,
};
use vphawkes::{Error, TriggeringKernel};

fn expo(beta: f64) -> TriggeringKernel {
    TriggeringKernel::exponential(beta).unwrap()
}

#[test]
fn poisson_counts() {
    assert!(simulate_poisson(0.0, 1000.0, 1).unwrap().is_empty());
    let reps = 500;
    let mean = (0..reps).map(|s| simulate_poisson(0.5, 1000.0, s).unwrap().len() as f64).sum::<f64>() / reps as f64;
    // standard error of the mean is sqrt(500)/sqrt(500) = 1
    assert!((mean - 500.0).abs() < 3.0, "{mean}");
}

#[test]
fn zero_productivity_has_no_offspring() {
    let cfg = SimulationConfig::new(0.5, expo(0.7), ProductivitySpec::Constant(0.0), 1000.0);
    let sim = simulate_variable_hawkes(&cfg, 5).unwrap();
    assert_eq!(sim.background_count(), sim.n());
    assert!(sim.offspring_counts().iter().all(|&c| c == 0));
}

#[test]
fn fixed_seed_is_reproducible() {
    let cfg = Scenario::Normals.simulation(1000.0);
    let a = simulate_variable_hawkes(&cfg, 99).unwrap();
    let b = simulate_variable_hawkes(&cfg, 99).unwrap();
    assert_eq!(a.catalog, b.catalog);
    assert_eq!(a.productivity, b.productivity);
    let c = simulate_variable_hawkes(&cfg, 100).unwrap();
    assert_ne!(a.catalog, c.catalog);
}

#[test]
fn normals_mean_count_matches_total_productivity() {
    let cfg = Scenario::Normals.simulation(1000.0);
    let (mut n_sum, mut k_sum) = (0.0, 0.0);
    for seed in 0..200 {
        let sim = simulate_variable_hawkes(&cfg, seed).unwrap();
        n_sum += sim.n() as f64;
        k_sum += sim.productivity.iter().sum::<f64>();
    }
    let expected = 500.0 + k_sum / 200.0;
    let mean = n_sum / 200.0;
    assert!((mean - expected).abs() < 0.05 * expected, "{mean} vs {expected}");
    assert!((200.0..1500.0).contains(&mean));
}

#[test]
fn etas_mean_count_matches_cluster_size() {
    let cfg = etas_study_config();
    assert!((cfg.branching_ratio() - 0.2 * 2.3 / 1.1).abs() < 1e-12);
    let mean = (0..200).map(|s| simulate_etas(&cfg, s).unwrap().n() as f64).sum::<f64>() / 200.0;
    let expected = 100.0 / (1.0 - cfg.branching_ratio());
    assert!((mean - expected).abs() < 0.1 * expected, "{mean} vs {expected}");
}

#[test]
fn etas_without_productivity_is_poisson_with_marks() {
    let cfg = EtasConfig {
        base_productivity: 0.0,
        ..etas_study_config()
    };
    let sim = simulate_etas(&cfg, 3).unwrap();
    assert_eq!(sim.background_count(), sim.n());
    let marks = sim.catalog.marks().unwrap();
    assert!(marks.iter().all(|m| *m >= 3.5));
}

#[test]
fn direct_offspring_match_productivity_times_tail_mass() {
    // expected children of event i: K · ∫₀^{T−τᵢ} g
    let kernel = expo(0.7);
    let cfg = SimulationConfig::new(0.2, kernel, ProductivitySpec::time_function(|t| 0.3 + 0.4 * (t / 500.0).sin().abs()), 500.0);
    let (mut observed, mut expected) = (0.0, 0.0);
    for seed in 0..200 {
        let sim = simulate_variable_hawkes(&cfg, seed).unwrap();
        let counts = sim.offspring_counts();
        for (i, &t) in sim.catalog.times().iter().enumerate() {
            observed += counts[i] as f64;
            expected += sim.productivity[i] * kernel.tail_integral(500.0 - t);
        }
    }
    // Poisson total: sd = sqrt(expected)
    assert!((observed - expected).abs() < 4.0 * expected.sqrt(), "{observed} vs {expected}");
}

#[test]
fn cascade_cap_is_enforced() {
    let cfg = SimulationConfig::new(0.5, expo(0.7), ProductivitySpec::Constant(1.5), 1000.0).with_event_cap(2000);
    assert!(matches!(simulate_variable_hawkes(&cfg, 1), Err(Error::CascadeCapExceeded { .. })));
}

#[test]
fn renewal_first_gap_measured_from_origin() {
    let cfg = Scenario::Renewal.simulation(1000.0);
    let sim = simulate_variable_hawkes(&cfg, 8).unwrap();
    let t = sim.catalog.times();
    let f = vphawkes::experiments::renewal_productivity;
    assert!((sim.productivity[0] - f(t[0])).abs() < 1e-15);
    for i in 1..t.len() {
        assert!((sim.productivity[i] - f(t[i] - t[i - 1])).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn catalogs_are_sorted_and_inside_the_window(
        mu in 0.01f64..1.0, k in 0.0f64..0.9, beta in 0.1f64..3.0, t in 10.0f64..500.0, seed in 0u64..1000,
    ) {
        let cfg = SimulationConfig::new(mu, expo(beta), ProductivitySpec::Constant(k), t);
        let sim = simulate_variable_hawkes(&cfg, seed).unwrap();
        let times = sim.catalog.times();
        prop_assert!(times.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(times.iter().all(|&s| (0.0..=t).contains(&s)));
        prop_assert_eq!(sim.productivity.len(), sim.n());
        prop_assert_eq!(sim.parent.len(), sim.n());
        for (i, p) in sim.parent.iter().enumerate() {
            if let Some(p) = p {
                prop_assert!(*p < i);
            }
        }
    }
}
