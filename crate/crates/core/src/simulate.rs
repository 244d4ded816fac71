//! Branching (cluster) simulation of variable-productivity Hawkes processes.
//!
//! Background events are homogeneous Poisson on `[0, T]`. Every event at
//! `τ` with productivity `K` has `Poisson(K · ∫₀^{T−τ} g)` direct offspring at
//! lags drawn from `g` restricted to `[0, T − τ]`. Pending events sit in a
//! min-heap and are finalized in time order, so when an event is popped all
//! earlier events are already known; that is what lets renewal
//! productivities (which depend on the gap to the previous event) be
//! assigned exactly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::kernel::TriggeringKernel;

pub const DEFAULT_EVENT_CAP: usize = 1_000_000;

/// Seeded generator used by every randomized operation in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for replicate `index` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How each event's productivity is assigned at birth.
#[derive(Clone)]
pub enum ProductivitySpec {
    Constant(f64),
    /// `K(τ) = f(τ)`.
    TimeFunction(ScalarFn),
    /// `K(τᵢ) = f(τᵢ − τᵢ₋₁)`, with `τ₀ = 0`.
    Renewal(ScalarFn),
    /// `K = A · exp(a (m − M0))` for the event's magnitude `m`.
    Magnitude { base: f64, scale: f64, m0: f64 },
}

impl ProductivitySpec {
    pub fn time_function<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ProductivitySpec::TimeFunction(Arc::new(f))
    }

    pub fn renewal<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ProductivitySpec::Renewal(Arc::new(f))
    }

    fn assign(&self, t: f64, gap: f64, mark: Option<f64>) -> Result<f64> {
        let k = match self {
            ProductivitySpec::Constant(k) => *k,
            ProductivitySpec::TimeFunction(f) => f(t),
            ProductivitySpec::Renewal(f) => f(gap),
            ProductivitySpec::Magnitude { base, scale, m0 } => {
                let m = mark.ok_or_else(|| {
                    Error::InvalidParameter(
                        "magnitude productivity requires a magnitude distribution".into(),
                    )
                })?;
                base * (scale * (m - m0)).exp()
            }
        };
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "productivity must be finite and nonnegative, got {k} at t = {t}"
            )));
        }
        Ok(k)
    }
}

impl fmt::Debug for ProductivitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductivitySpec::Constant(k) => write!(f, "Constant({k})"),
            ProductivitySpec::TimeFunction(_) => f.write_str("TimeFunction(..)"),
            ProductivitySpec::Renewal(_) => f.write_str("Renewal(..)"),
            ProductivitySpec::Magnitude { base, scale, m0 } => {
                write!(f, "Magnitude {{ base: {base}, scale: {scale}, m0: {m0} }}")
            }
        }
    }
}

/// Lower-truncated exponential (Gutenberg–Richter) magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeDistribution {
    pub rate: f64,
    pub m0: f64,
}

impl MagnitudeDistribution {
    pub fn new(rate: f64, m0: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) || !m0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "magnitude rate must be positive and cutoff finite, got rate {rate}, cutoff {m0}"
            )));
        }
        Ok(Self { rate, m0 })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let e = Exp::new(self.rate).expect("validated rate");
        self.m0 + e.sample(rng)
    }

    /// `E[exp(a (m − M0))]`, infinite when `a >= rate`.
    pub fn mean_exp_factor(&self, a: f64) -> f64 {
        if a >= self.rate {
            f64::INFINITY
        } else {
            self.rate / (self.rate - a)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub mu: f64,
    pub kernel: TriggeringKernel,
    pub productivity: ProductivitySpec,
    pub window_end: f64,
    pub magnitudes: Option<MagnitudeDistribution>,
    pub event_cap: usize,
}

impl SimulationConfig {
    pub fn new(
        mu: f64,
        kernel: TriggeringKernel,
        productivity: ProductivitySpec,
        window_end: f64,
    ) -> Self {
        Self {
            mu,
            kernel,
            productivity,
            window_end,
            magnitudes: None,
            event_cap: DEFAULT_EVENT_CAP,
        }
    }

    pub fn with_magnitudes(mut self, mags: MagnitudeDistribution) -> Self {
        self.magnitudes = Some(mags);
        self
    }

    pub fn with_event_cap(mut self, cap: usize) -> Self {
        self.event_cap = cap;
        self
    }
}

/// A simulated realization together with the bookkeeping needed to score
/// estimators against the truth.
#[derive(Debug, Clone)]
pub struct SimulatedProcess {
    pub catalog: EventCatalog,
    /// Productivity each event was born with, in time order.
    pub productivity: Vec<f64>,
    /// Index of the direct parent, `None` for background events.
    pub parent: Vec<Option<usize>>,
}

impl SimulatedProcess {
    pub fn n(&self) -> usize {
        self.catalog.len()
    }

    pub fn background_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_none()).count()
    }

    /// Number of direct offspring of each event.
    pub fn offspring_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n()];
        for p in self.parent.iter().flatten() {
            counts[*p] += 1;
        }
        counts
    }
}

#[derive(Clone, Copy)]
struct Pending {
    time: f64,
    parent: Option<usize>,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time)
    }
}

fn validate_common(mu: f64, window_end: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "background rate must be nonnegative, got {mu}"
        )));
    }
    if !(window_end.is_finite() && window_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window end must be positive, got {window_end}"
        )));
    }
    Ok(())
}

fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> Result<usize> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as usize)
}

fn poisson_times<R: Rng + ?Sized>(rng: &mut R, rate: f64, window_end: f64) -> Result<Vec<f64>> {
    let n = poisson_count(rng, rate * window_end)?;
    let mut times: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * window_end).collect();
    times.sort_by(f64::total_cmp);
    Ok(times)
}

/// Homogeneous Poisson process of the given rate on `[0, window_end]`.
pub fn simulate_poisson(rate: f64, window_end: f64, seed: u64) -> Result<EventCatalog> {
    validate_common(rate, window_end)?;
    let mut rng = rng_from_seed(seed);
    let mut times = poisson_times(&mut rng, rate, window_end)?;
    dedup_strict(&mut times);
    EventCatalog::new(times, window_end)
}

// Continuous draws essentially never tie; when they do, nudge forward.
fn dedup_strict(times: &mut [f64]) {
    for i in 1..times.len() {
        if times[i] <= times[i - 1] {
            times[i] = times[i - 1].next_up();
        }
    }
}

/// Simulates with an explicit seed.
pub fn simulate_variable_hawkes(cfg: &SimulationConfig, seed: u64) -> Result<SimulatedProcess> {
    simulate_with_rng(cfg, &mut rng_from_seed(seed))
}

pub fn simulate_with_rng<R: Rng + ?Sized>(
    cfg: &SimulationConfig,
    rng: &mut R,
) -> Result<SimulatedProcess> {
    validate_common(cfg.mu, cfg.window_end)?;
    cfg.kernel.validate()?;
    let t_end = cfg.window_end;

    let mut heap: BinaryHeap<Pending> = poisson_times(rng, cfg.mu, t_end)?
        .into_iter()
        .map(|time| Pending { time, parent: None })
        .collect();
    if heap.len() > cfg.event_cap {
        return Err(Error::CascadeCapExceeded { cap: cfg.event_cap });
    }
    let mut generated = heap.len();

    let mut times = Vec::with_capacity(heap.len());
    let mut productivity = Vec::with_capacity(heap.len());
    let mut parent = Vec::with_capacity(heap.len());
    let mut marks = cfg.magnitudes.map(|_| Vec::with_capacity(heap.len()));

    while let Some(Pending { mut time, parent: p }) = heap.pop() {
        let prev = times.last().copied().unwrap_or(0.0);
        if !times.is_empty() && time <= prev {
            time = prev.next_up();
        }
        if time > t_end {
            continue;
        }
        let mark = cfg.magnitudes.map(|d| d.sample(rng));
        let k = cfg.productivity.assign(time, time - prev, mark)?;
        let index = times.len();
        times.push(time);
        productivity.push(k);
        parent.push(p);
        if let (Some(ms), Some(m)) = (marks.as_mut(), mark) {
            ms.push(m);
        }

        let horizon = t_end - time;
        let n_children = poisson_count(rng, k * cfg.kernel.tail_integral(horizon))?;
        generated += n_children;
        if generated > cfg.event_cap {
            return Err(Error::CascadeCapExceeded { cap: cfg.event_cap });
        }
        for _ in 0..n_children {
            let mut lag = cfg.kernel.sample_truncated(rng, horizon);
            while lag <= 0.0 {
                lag = cfg.kernel.sample_truncated(rng, horizon);
            }
            heap.push(Pending {
                time: time + lag,
                parent: Some(index),
            });
        }
    }

    let catalog = EventCatalog::with_marks(times, marks, None, t_end)?;
    Ok(SimulatedProcess {
        catalog,
        productivity,
        parent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtasConfig {
    pub mu: f64,
    pub kernel: TriggeringKernel,
    pub base_productivity: f64,
    pub magnitude_scale: f64,
    pub magnitudes: MagnitudeDistribution,
    pub window_end: f64,
}

impl EtasConfig {
    /// Mean productivity `A · E[exp(a (m − M0))]`.
    pub fn branching_ratio(&self) -> f64 {
        self.base_productivity * self.magnitudes.mean_exp_factor(self.magnitude_scale)
    }
}

/// ETAS: productivity `A · exp(a (m − M0))` with iid magnitudes.
pub fn simulate_etas(cfg: &EtasConfig, seed: u64) -> Result<SimulatedProcess> {
    let ratio = cfg.branching_ratio();
    if ratio >= 1.0 {
        log::warn!("ETAS branching ratio {ratio} >= 1; the cascade may not terminate");
    }
    let sim = SimulationConfig::new(
        cfg.mu,
        cfg.kernel,
        ProductivitySpec::Magnitude {
            base: cfg.base_productivity,
            scale: cfg.magnitude_scale,
            m0: cfg.magnitudes.m0,
        },
        cfg.window_end,
    )
    .with_magnitudes(cfg.magnitudes);
    simulate_variable_hawkes(&sim, seed)
}
