//! Command-line front end. [`cli_main`] parses arguments, runs one
//! subcommand and returns the process exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::EventCatalog;
use crate::diagnostics::{
    ks_uniformity, normalized_cumsum, super_thin, uniformity_band, BandMethod,
};
use crate::error::{Error, Result};
use crate::estimate::{
    empirical_productivities, fit_constant_hawkes, mle_productivities, FitOptions, FitResult,
    SolveOptions,
};
use crate::experiments::{check_against_paper, run_scenario, ExperimentConfig, Scenario};
use crate::io::{
    read_catalog, read_json, write_catalog_csv, write_json, write_mark_curve_csv,
    write_productivity_csv, write_residuals_csv, CatalogFileSpec, CatalogFilter, ResidualRow,
    RunConfig,
};
use crate::kernel::TriggeringKernel;
use crate::model::{HawkesParams, Intensity, ProductivityEstimate};
use crate::simulate::simulate_variable_hawkes;
use crate::stabilize::{
    smooth_by_mark, stabilize_pipeline, truncate_nonneg, Bandwidth, PipelineConfig, SmoothDomain,
    SmootherConfig, Stage,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "vphawkes", version, about = "Variable-productivity Hawkes process tools (times in days)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file of key = value settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub ridge: Option<f64>,
    /// Fixed smoothing bandwidth instead of the rule of thumb.
    #[arg(long, global = true)]
    pub bandwidth: Option<f64>,
    /// Counting window of the empirical estimator.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Super-thinning rate; defaults to the catalog's mean rate.
    #[arg(long = "b-rate", global = true)]
    pub b_rate: Option<f64>,
    #[arg(long = "silverman-exponent", global = true, allow_hyphen_values = true)]
    pub silverman_exponent: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a scenario and write the catalog.
    Simulate {
        #[arg(long, value_parser = parse_scenario)]
        scenario: Scenario,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        window_end: Option<f64>,
        /// Also write the true productivities.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Fit a constant-productivity Hawkes model (exponential kernel).
    Fit {
        #[command(flatten)]
        input: CatalogInput,
        /// JSON output; printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        init_k: f64,
        #[arg(long, default_value_t = 1.0)]
        init_beta: f64,
    },
    /// Estimate and stabilize per-event productivities.
    Productivity {
        #[command(flatten)]
        input: CatalogInput,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Estimator::Mle)]
        estimator: Estimator,
        #[arg(long, value_enum, default_value_t = Domain::Time)]
        domain: Domain,
        /// Comma-separated stages applied in order.
        #[arg(long, value_delimiter = ',', default_value = "truncate,smooth,rescale")]
        stages: Vec<StageArg>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Super-thinned residuals and a uniformity verdict.
    Residuals {
        #[command(flatten)]
        input: CatalogInput,
        #[command(flatten)]
        model: ModelArgs,
        /// Per-event productivities (`index,time,k` CSV); the constant K of
        /// the model is used when omitted.
        #[arg(long)]
        productivity: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        nsim: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Simulation study comparing estimator RMSEs against reported values.
    Bench {
        /// A scenario name or `all`.
        #[arg(long, default_value = "all")]
        scenario: String,
        #[arg(long)]
        replicates: Option<usize>,
        /// Exit with status 3 when a tolerance fails.
        #[arg(long)]
        check: bool,
        /// Per-replicate CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CatalogInput {
    #[arg(long)]
    pub catalog: PathBuf,
    #[arg(long)]
    pub min_magnitude: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<f64>,
    #[arg(long)]
    pub window_end: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Fit JSON from the `fit` subcommand.
    #[arg(long)]
    pub fit: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Estimator {
    Mle,
    Empirical,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Domain {
    Time,
    Mark,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StageArg {
    Truncate,
    Smooth,
    Rescale,
}

fn parse_scenario(s: &str) -> std::result::Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Flags merged over the config file.
#[derive(Debug, Clone)]
struct Settings {
    seed: u64,
    explicit_seed: Option<u64>,
    solve: SolveOptions,
    smoother: SmootherConfig,
    delta: f64,
    b_rate: Option<f64>,
    file: RunConfig,
}

impl Settings {
    fn resolve(g: &GlobalArgs) -> Result<Self> {
        let file = match &g.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let defaults = SolveOptions::default();
        let mut smoother = SmootherConfig::default();
        if let Some(h) = g.bandwidth.or(file.bandwidth) {
            smoother.bandwidth = Bandwidth::Fixed(h);
        }
        if let Some(e) = g.silverman_exponent.or(file.silverman_exponent) {
            smoother.silverman_exponent = e;
        }
        Ok(Self {
            seed: g.seed.or(file.seed).unwrap_or(0),
            explicit_seed: g.seed.or(file.seed),
            solve: SolveOptions {
                ridge: g.ridge.or(file.ridge).unwrap_or(defaults.ridge),
                pivot_tolerance: file.pivot_tolerance.unwrap_or(defaults.pivot_tolerance),
            },
            smoother,
            delta: g.delta.or(file.delta).unwrap_or(crate::estimate::DEFAULT_DELTA),
            b_rate: g.b_rate.or(file.b_rate),
            file,
        })
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let s = Settings::resolve(&cli.global)?;
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            window_end,
            truth,
        } => {
            let t = window_end.or(s.file.window_end).unwrap_or(crate::experiments::SCENARIO_WINDOW);
            let sim = simulate_variable_hawkes(&scenario.simulation(t), s.seed)?;
            write_catalog_csv(&out, &sim.catalog)?;
            if let Some(p) = truth {
                write_productivity_csv(p, &sim.catalog, &ProductivityEstimate::raw(sim.productivity.clone()))?;
            }
            println!("{} events on [0, {t}] written to {}", sim.n(), out.display());
            Ok(EXIT_OK)
        }
        Command::Fit {
            input,
            out,
            init_k,
            init_beta,
        } => {
            let catalog = load_catalog(&input, &s)?;
            let fit = fit_catalog(&catalog, init_k, init_beta)?;
            match out {
                Some(p) => write_json(p, &fit)?,
                None => println!("{}", serde_json::to_string_pretty(&fit)?),
            }
            Ok(EXIT_OK)
        }
        Command::Productivity {
            input,
            model,
            estimator,
            domain,
            stages,
            out,
        } => {
            let catalog = load_catalog(&input, &s)?;
            let params = resolve_model(&model, &catalog, &s)?;
            let raw = match estimator {
                Estimator::Mle => mle_productivities(&catalog, params.mu, &params.kernel, &s.solve)?.estimate,
                Estimator::Empirical => empirical_productivities(&catalog, s.delta, params.mu)?,
            };
            match domain {
                Domain::Time => {
                    let cfg = PipelineConfig {
                        stages: stages
                            .iter()
                            .map(|st| match st {
                                StageArg::Truncate => Stage::Truncate,
                                StageArg::Smooth => Stage::Smooth,
                                StageArg::Rescale => Stage::Rescale,
                            })
                            .collect(),
                        smoother: s.smoother,
                        ..PipelineConfig::default()
                    };
                    let est = stabilize_pipeline(&raw, &catalog, params.mu, &cfg)?;
                    write_productivity_csv(&out, &catalog, &est)?;
                }
                Domain::Mark => {
                    let marks = catalog.marks().ok_or_else(|| {
                        Error::InvalidCatalog("mark-domain smoothing needs a magnitude column".into())
                    })?;
                    let smoother = SmootherConfig {
                        domain: SmoothDomain::Mark,
                        ..s.smoother
                    };
                    let curve = smooth_by_mark(
                        &truncate_nonneg(&raw),
                        marks,
                        params.mu,
                        catalog.window_end(),
                        &smoother,
                    )?;
                    write_mark_curve_csv(&out, &curve)?;
                }
            }
            println!("productivities for {} events written to {}", catalog.len(), out.display());
            Ok(EXIT_OK)
        }
        Command::Residuals {
            input,
            model,
            productivity,
            out,
            nsim,
            level,
        } => {
            let catalog = load_catalog(&input, &s)?;
            let params = resolve_model(&model, &catalog, &s)?;
            let k = match productivity {
                Some(p) => read_productivity_column(&p, catalog.len())?,
                None => vec![params.k; catalog.len()],
            };
            let lambda = Intensity::new(&catalog, params.mu, params.kernel, &k)?;
            let b = s.b_rate.unwrap_or_else(|| catalog.mean_rate());
            let thin = super_thin(&catalog, &lambda, b, s.seed)?;
            let us = &thin.standardized_u;
            let ks = ks_uniformity(us);
            let path = normalized_cumsum(us);
            let band = if us.is_empty() {
                None
            } else {
                Some(uniformity_band(us.len(), nsim, level, BandMethod::Simultaneous, s.seed.wrapping_add(1))?)
            };
            let rows: Vec<ResidualRow> = (0..us.len())
                .map(|i| ResidualRow {
                    t_k: thin.residual_times[i],
                    u_k: us[i],
                    cumsum: path[i],
                    lower: band.as_ref().map_or(f64::NAN, |b| b.lower[i]),
                    upper: band.as_ref().map_or(f64::NAN, |b| b.upper[i]),
                })
                .collect();
            write_residuals_csv(&out, &rows)?;
            let inside = band.as_ref().is_some_and(|b| b.contains(&path));
            println!(
                "{} residual points (b = {b:.6}); KS D = {:.4}, p = {:.4}; cumulative sum {} the {:.0}% band",
                thin.len(),
                ks.statistic,
                ks.p_value,
                if inside { "inside" } else { "outside" },
                level * 100.0
            );
            Ok(EXIT_OK)
        }
        Command::Bench {
            scenario,
            replicates,
            check,
            out,
        } => {
            let scenarios: Vec<Scenario> = if scenario.eq_ignore_ascii_case("all") {
                Scenario::TIME_VARYING.to_vec()
            } else {
                vec![scenario.parse()?]
            };
            let mut all_passed = true;
            let mut per_replicate = Vec::new();
            for sc in scenarios {
                let mut cfg = ExperimentConfig::new(sc);
                if let Some(seed) = s.explicit_seed {
                    cfg.seed = seed;
                }
                cfg.replicates = replicates.or(s.file.replicates).unwrap_or(cfg.replicates);
                cfg.delta = s.delta;
                cfg.smoother = s.smoother;
                cfg.solve = s.solve;
                let summary = run_scenario(&cfg)?;
                println!(
                    "{sc:<12} unscaled empirical {}  MLE {}  scaled empirical {}  singular {}/{}",
                    summary.unscaled_empirical,
                    summary.mle_pipeline,
                    summary.scaled_empirical,
                    summary.singular_failures,
                    summary.replicates
                );
                for c in check_against_paper(&summary) {
                    all_passed &= c.passed;
                    if check {
                        let status = if c.passed { "pass" } else { "FAIL" };
                        if c.value.is_nan() {
                            println!("  [{status}] {}", c.label);
                        } else {
                            println!(
                                "  [{status}] {} (measured {:.4}, reported {:.4})",
                                c.label, c.value, c.target
                            );
                        }
                    }
                }
                per_replicate.extend(summary.per_replicate.into_iter().map(|r| (sc, r)));
            }
            if let Some(p) = out {
                write_bench_csv(&p, &per_replicate)?;
            }
            Ok(if check && !all_passed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
    }
}

fn load_catalog(input: &CatalogInput, s: &Settings) -> Result<EventCatalog> {
    let spec = CatalogFileSpec {
        filter: CatalogFilter {
            min_magnitude: input.min_magnitude.or(s.file.min_magnitude),
            max_depth: input.max_depth.or(s.file.max_depth),
            ..Default::default()
        },
        window_end: input.window_end.or(s.file.window_end),
        jitter_seed: s.seed,
        ..Default::default()
    };
    read_catalog(&input.catalog, &spec)
}

fn fit_catalog(catalog: &EventCatalog, init_k: f64, init_beta: f64) -> Result<FitResult> {
    let init = HawkesParams::new(
        (catalog.mean_rate() * (1.0 - init_k.min(0.9))).max(1e-6),
        init_k,
        TriggeringKernel::exponential(init_beta)?,
    )?;
    fit_constant_hawkes(catalog, &init, &FitOptions::default())
}

/// Explicit flags, then a fit file, then the config file; anything still
/// missing comes from a fresh constant-productivity fit.
fn resolve_model(m: &ModelArgs, catalog: &EventCatalog, s: &Settings) -> Result<HawkesParams> {
    let from_file = match &m.fit {
        Some(p) => Some(read_json::<FitResult>(p)?),
        None => None,
    };
    let pick = |flag: Option<f64>, fitted: Option<f64>, cfg: Option<f64>| flag.or(fitted).or(cfg);
    let mut mu = pick(m.mu, from_file.as_ref().map(|f| f.estimate.mu), s.file.mu);
    let mut beta = pick(m.beta, from_file.as_ref().map(|f| f.estimate.beta), s.file.beta);
    let mut k = pick(m.k, from_file.as_ref().map(|f| f.estimate.k), s.file.k);
    if mu.is_none() || beta.is_none() || k.is_none() {
        let fit = fit_catalog(catalog, k.unwrap_or(0.5), beta.unwrap_or(1.0))?;
        mu = mu.or(Some(fit.estimate.mu));
        beta = beta.or(Some(fit.estimate.beta));
        k = k.or(Some(fit.estimate.k));
    }
    HawkesParams::new(
        mu.unwrap_or_default(),
        k.unwrap_or_default(),
        TriggeringKernel::exponential(beta.unwrap_or_default())?,
    )
}

fn read_productivity_column(path: &Path, n: usize) -> Result<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = headers.iter().position(|h| h == "k").ok_or_else(|| Error::Parse {
        line: 1,
        msg: "no 'k' column".into(),
    })?;
    let mut out = Vec::with_capacity(n);
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line()) as usize;
        let cell = record.get(col).unwrap_or("");
        out.push(cell.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("'{cell}' is not a number"),
        })?);
    }
    if out.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: out.len(),
        });
    }
    Ok(out)
}

fn write_bench_csv(path: &Path, rows: &[(Scenario, crate::experiments::ReplicateScores)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "scenario",
        "replicate",
        "n",
        "unscaled_empirical",
        "mle_raw",
        "mle_truncated_smoothed",
        "mle_pipeline",
        "scaled_empirical",
    ])?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    for (sc, r) in rows {
        w.write_record([
            sc.name().to_string(),
            r.index.to_string(),
            r.n.to_string(),
            r.unscaled_empirical.to_string(),
            opt(r.mle_raw),
            opt(r.mle_truncated_smoothed),
            opt(r.mle_pipeline),
            r.scaled_empirical.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
