macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(mle_worked, "mle_worked_example.rs");
example!(simulate, "simulate_processes.rs");
example!(stabilize, "stabilize_estimates.rs");
example!(noise, "noise_sensitivity.rs");
example!(constant_fit, "constant_fit.rs");
example!(thinning, "super_thinning.rs");
example!(ingest, "catalog_ingest.rs");

#[test]
fn mle_worked_example_runs() {
    mle_worked::run_example().expect("worked example should run");
}

#[test]
fn simulation_example_runs() {
    simulate::run_example().expect("simulation example should run");
}

#[test]
fn stabilization_example_runs() {
    stabilize::run_example().expect("stabilization example should run");
}

#[test]
fn noise_example_runs() {
    noise::run_example().expect("noise example should run");
}

#[test]
fn constant_fit_example_runs() {
    constant_fit::run_example().expect("fit example should run");
}

#[test]
fn super_thinning_example_runs() {
    thinning::run_example().expect("super-thinning example should run");
}

#[test]
fn ingest_example_runs() {
    ingest::run_example().expect("ingest example should run");
}
