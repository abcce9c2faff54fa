//! Monte Carlo size and power studies.
//!
//! Each replication draws latent event and censoring times for both groups
//! from its own [`RandomStream`], observes `min(T, C)` with indicator
//! `T <= C`, runs the requested tests and records whether `p < alpha`.
//! Replications are spread over a worker pool and reduced by summing
//! integer counts, so a study's result does not depend on the worker count.
//!
//! Replications in which a test cannot be computed (zero null variance,
//! zero expected events, no events at all) are counted as degenerate for
//! that test and left out of its rejection-rate denominator.

pub mod builtin;
pub mod report;
mod stream;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::observation::{Observation, TwoSampleDataset};
use crate::outcome::Method;
use crate::special::Z_975;

pub use stream::{derive_seed, RandomStream};

fn default_alpha() -> f64 {
    0.05
}

fn default_replications() -> u64 {
    10_000
}

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}

/// One simulation scenario. Absent censoring specs mean no censoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub event1: DistributionSpec,
    pub event2: DistributionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cens1: Option<DistributionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cens2: Option<DistributionSpec>,
    pub n1: usize,
    pub n2: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_replications")]
    pub replications: u64,
    /// Optional in files; the command-line driver always sets it from its
    /// `--seed`.
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::Config(format!(
                "{}: group sizes must be at least 2 (got {}, {})",
                self.id, self.n1, self.n2
            )));
        }
        // alpha = 1 is allowed as a boundary check: every p < 1 rejects
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!(
                "{}: alpha must be in (0, 1], got {}",
                self.id, self.alpha
            )));
        }
        if self.replications == 0 {
            return Err(Error::Config(format!("{}: replications must be >= 1", self.id)));
        }
        if self.methods.is_empty() {
            return Err(Error::Config(format!("{}: no methods requested", self.id)));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: Vec<ScenarioConfig>,
}

/// Parses a scenario file: a TOML array of `[[scenario]]` tables.
pub fn parse_scenario_file(text: &str) -> Result<Vec<ScenarioConfig>> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if file.scenario.is_empty() {
        return Err(Error::Config("no [[scenario]] tables".into()));
    }
    for cfg in &file.scenario {
        cfg.validate()?;
    }
    Ok(file.scenario)
}

/// Latent times of one replication together with the observed dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationDraw {
    pub events1: Vec<f64>,
    pub events2: Vec<f64>,
    pub censoring1: Option<Vec<f64>>,
    pub censoring2: Option<Vec<f64>>,
    pub dataset: TwoSampleDataset,
}

fn observe(events: &[f64], censoring: Option<&[f64]>) -> Vec<Observation> {
    match censoring {
        None => events.iter().map(|&t| Observation::event(t)).collect(),
        Some(cs) => events
            .iter()
            .zip(cs)
            .map(|(&t, &c)| {
                if t <= c {
                    Observation::event(t)
                } else {
                    Observation::censored(c)
                }
            })
            .collect(),
    }
}

/// Draws one replication: group 1 events, group 1 censoring, group 2
/// events, group 2 censoring, in that order from `stream`.
pub fn simulate_once(cfg: &ScenarioConfig, stream: &mut RandomStream) -> ReplicationDraw {
    let events1 = cfg.event1.sample(cfg.n1, stream);
    let censoring1 = cfg.cens1.map(|c| c.sample(cfg.n1, stream));
    let events2 = cfg.event2.sample(cfg.n2, stream);
    let censoring2 = cfg.cens2.map(|c| c.sample(cfg.n2, stream));
    let dataset = TwoSampleDataset::new(
        observe(&events1, censoring1.as_deref()),
        observe(&events2, censoring2.as_deref()),
    )
    .expect("group sizes validated");
    ReplicationDraw {
        events1,
        events2,
        censoring1,
        censoring2,
        dataset,
    }
}

/// Per-method tallies for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub rejections: u64,
    pub replications: u64,
    pub degenerate_count: u64,
    /// `rejections / (replications - degenerate_count)`; `None` when every
    /// replication was degenerate.
    pub rate: Option<f64>,
    pub mc_se: Option<f64>,
}

impl MethodResult {
    fn from_counts(method: Method, rejections: u64, replications: u64, degenerate_count: u64) -> Self {
        let valid = replications - degenerate_count;
        let (rate, mc_se) = if valid == 0 {
            (None, None)
        } else {
            let r = rejections as f64 / valid as f64;
            (Some(r), Some((r * (1.0 - r) / valid as f64).sqrt()))
        };
        Self {
            method,
            rejections,
            replications,
            degenerate_count,
            rate,
            mc_se,
        }
    }

    pub fn usable(&self) -> bool {
        self.rate.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyResult {
    pub scenario_id: String,
    pub alpha: f64,
    pub replications: u64,
    pub methods: Vec<MethodResult>,
    /// Censored subjects per group over all replications.
    pub censored: [u64; 2],
    /// Subjects per group over all replications.
    pub subjects: [u64; 2],
}

impl StudyResult {
    pub fn method(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }

    pub fn rate(&self, m: Method) -> Option<f64> {
        self.method(m).and_then(|r| r.rate)
    }

    /// Realized censoring fraction per group.
    pub fn censoring_fraction(&self) -> [f64; 2] {
        [
            self.censored[0] as f64 / self.subjects[0] as f64,
            self.censored[1] as f64 / self.subjects[1] as f64,
        ]
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    rejections: [u64; 5],
    degenerate: [u64; 5],
    censored: [u64; 2],
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..5 {
            self.rejections[i] += other.rejections[i];
            self.degenerate[i] += other.degenerate[i];
        }
        self.censored[0] += other.censored[0];
        self.censored[1] += other.censored[1];
        self
    }
}

fn method_slot(m: Method) -> usize {
    Method::ALL.iter().position(|&x| x == m).expect("known method")
}

fn replicate(cfg: &ScenarioConfig, index: u64) -> Result<Tally> {
    let mut stream = RandomStream::new(cfg.master_seed, index);
    let draw = simulate_once(cfg, &mut stream);
    let ds = &draw.dataset;
    let mut tally = Tally::default();
    tally.censored[0] = ds.group1().iter().filter(|o| o.is_censored()).count() as u64;
    tally.censored[1] = ds.group2().iter().filter(|o| o.is_censored()).count() as u64;
    for &m in &cfg.methods {
        let slot = method_slot(m);
        match crate::run_method(m, ds) {
            Ok(out) => tally.rejections[slot] += u64::from(out.rejects(cfg.alpha)),
            Err(e) if e.is_degenerate() => tally.degenerate[slot] += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(tally)
}

/// Worker pool of the requested size; `0` means one worker per core.
pub fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))
}

/// Empirical rejection rate of each requested method.
pub fn rejection_rates(cfg: &ScenarioConfig, workers: usize) -> Result<StudyResult> {
    let pool = worker_pool(workers)?;
    rejection_rates_in(cfg, &pool)
}

/// As [`rejection_rates`], on an existing pool.
pub fn rejection_rates_in(cfg: &ScenarioConfig, pool: &rayon::ThreadPool) -> Result<StudyResult> {
    cfg.validate()?;
    let tally = pool.install(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|i| replicate(cfg, i))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })?;
    let methods = cfg
        .methods
        .iter()
        .map(|&m| {
            let s = method_slot(m);
            MethodResult::from_counts(m, tally.rejections[s], cfg.replications, tally.degenerate[s])
        })
        .collect();
    Ok(StudyResult {
        scenario_id: cfg.id.clone(),
        alpha: cfg.alpha,
        replications: cfg.replications,
        methods,
        censored: tally.censored,
        subjects: [cfg.n1 as u64 * cfg.replications, cfg.n2 as u64 * cfg.replications],
    })
}

/// 95% acceptance region for an empirical size at nominal `alpha` from
/// `replications` runs:
/// `(alpha - 0.001 - z sqrt(alpha(1-alpha)/R), alpha + 0.001 + z sqrt(...))`,
/// clipped to `[0, 1]`. At alpha = 0.05 and R = 10,000 this is
/// (0.0447, 0.0553).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptanceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl AcceptanceInterval {
    pub fn new(alpha: f64, replications: u64) -> Self {
        let half = Z_975 * (alpha * (1.0 - alpha) / replications as f64).sqrt();
        Self {
            lower: (alpha - 0.001 - half).max(0.0),
            upper: (alpha + 0.001 + half).min(1.0),
        }
    }

    pub fn contains(&self, rate: f64) -> bool {
        rate > self.lower && rate < self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeRow {
    pub result: StudyResult,
    pub interval: AcceptanceInterval,
}

/// Runs every scenario of a size grid.
pub fn size_study(grid: &[ScenarioConfig], workers: usize) -> Result<Vec<SizeRow>> {
    let pool = worker_pool(workers)?;
    grid.iter()
        .map(|cfg| {
            Ok(SizeRow {
                result: rejection_rates_in(cfg, &pool)?,
                interval: AcceptanceInterval::new(cfg.alpha, cfg.replications),
            })
        })
        .collect()
}

/// Power study for one built-in case, sample size and censoring level.
pub fn power_study(
    case: builtin::Case,
    n: usize,
    censoring_percent: u32,
    replications: u64,
    seed: u64,
    workers: usize,
) -> Result<StudyResult> {
    let cfg = builtin::power_scenario(case, n, censoring_percent, replications, seed)?;
    rejection_rates(&cfg, workers)
}
