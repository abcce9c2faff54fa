//! The built-in size and power grids, loaded from `data/scenarios.toml`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Deserialize;

use super::{derive_seed, ScenarioConfig};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::outcome::Method;

/// Text of the built-in scenario file.
pub const SCENARIO_FILE: &str = include_str!("../../data/scenarios.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub size: SizeGrid,
    pub power: PowerGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeGrid {
    pub n: usize,
    pub alpha: f64,
    pub replications: u64,
    pub theta: Vec<f64>,
    pub family: Vec<SizeFamily>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeFamily {
    pub id: String,
    pub label: String,
    pub event: DistributionSpec,
    /// Nominal censoring level at each theta, in percent.
    pub censoring_percent: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerGrid {
    pub sample_sizes: Vec<usize>,
    pub alpha: f64,
    pub replications: u64,
    pub case: Vec<PowerCase>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerCase {
    pub id: String,
    pub event1: DistributionSpec,
    pub event2: DistributionSpec,
    pub censoring: Vec<CensoringRow>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensoringRow {
    pub percent: u32,
    pub cens1: DistributionSpec,
    pub cens2: DistributionSpec,
}

/// One row of the size grid: a family and a censoring level.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeCell {
    pub family_id: String,
    pub label: String,
    pub event: DistributionSpec,
    /// `None` for the uncensored row.
    pub theta: Option<f64>,
    pub nominal_percent: u32,
}

impl SizeCell {
    pub fn id(&self) -> String {
        match self.theta {
            None => format!("{}/uncensored", self.family_id),
            Some(t) => format!("{}/theta={t}", self.family_id),
        }
    }

    pub fn censoring(&self) -> Option<DistributionSpec> {
        self.theta
            .map(|t| DistributionSpec::uniform(t).expect("positive theta"))
    }
}

/// The parsed built-in catalog.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(SCENARIO_FILE).expect("built-in scenario file is valid"))
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let c: Catalog = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    for f in &c.size.family {
        if f.censoring_percent.len() != c.size.theta.len() {
            return Err(Error::Config(format!(
                "size family {}: {} censoring levels for {} theta values",
                f.id,
                f.censoring_percent.len(),
                c.size.theta.len()
            )));
        }
    }
    Ok(c)
}

/// The power-study alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    I,
    II,
    III,
    IV,
    V,
}

impl Case {
    pub const ALL: [Case; 5] = [Case::I, Case::II, Case::III, Case::IV, Case::V];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
            Case::V => "V",
        }
    }

    fn entry(self) -> &'static PowerCase {
        catalog()
            .power
            .case
            .iter()
            .find(|c| c.id == self.as_str())
            .expect("every case is in the built-in file")
    }

    /// Event distributions of the two samples.
    pub fn events(self) -> (DistributionSpec, DistributionSpec) {
        let e = self.entry();
        (e.event1, e.event2)
    }

    /// Censoring distributions for a level in percent; `None` for 0.
    pub fn censoring(self, percent: u32) -> Result<Option<(DistributionSpec, DistributionSpec)>> {
        if percent == 0 {
            return Ok(None);
        }
        self.entry()
            .censoring
            .iter()
            .find(|r| r.percent == percent)
            .map(|r| Some((r.cens1, r.cens2)))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "case {self}: no censoring level {percent}% (expected one of {})",
                    self.levels().iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
                ))
            })
    }

    /// Supported censoring levels in percent, including 0.
    pub fn levels(self) -> Vec<u32> {
        std::iter::once(0)
            .chain(self.entry().censoring.iter().map(|r| r.percent))
            .collect()
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case {s:?} (expected I, II, III, IV or V)")))
    }
}

/// Every size-grid cell, family by family, uncensored first.
pub fn size_cells() -> Vec<SizeCell> {
    let grid = &catalog().size;
    let mut cells = Vec::new();
    for f in &grid.family {
        cells.push(SizeCell {
            family_id: f.id.clone(),
            label: f.label.clone(),
            event: f.event,
            theta: None,
            nominal_percent: 0,
        });
        for (&theta, &pct) in grid.theta.iter().zip(&f.censoring_percent) {
            cells.push(SizeCell {
                family_id: f.id.clone(),
                label: f.label.clone(),
                event: f.event,
                theta: Some(theta),
                nominal_percent: pct,
            });
        }
    }
    cells
}

/// Scenario configs for the size grid. Row `k` is seeded with
/// `derive_seed(seed, k)`.
pub fn size_grid(replications: u64, seed: u64) -> Vec<ScenarioConfig> {
    let grid = &catalog().size;
    size_cells()
        .into_iter()
        .enumerate()
        .map(|(k, cell)| {
            let cens = cell.censoring();
            ScenarioConfig {
                id: cell.id(),
                event1: cell.event,
                event2: cell.event,
                cens1: cens,
                cens2: cens,
                n1: grid.n,
                n2: grid.n,
                alpha: grid.alpha,
                replications,
                master_seed: derive_seed(seed, k as u64),
                methods: Method::ALL.to_vec(),
            }
        })
        .collect()
}

/// Scenario config for one power-study cell.
pub fn power_scenario(
    case: Case,
    n: usize,
    censoring_percent: u32,
    replications: u64,
    seed: u64,
) -> Result<ScenarioConfig> {
    let grid = &catalog().power;
    if !grid.sample_sizes.contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "sample size {n} is not in the power grid (expected one of {:?})",
            grid.sample_sizes
        )));
    }
    let (event1, event2) = case.events();
    let cens = case.censoring(censoring_percent)?;
    let cfg = ScenarioConfig {
        id: format!("case{case}/n={n}/cens={censoring_percent}"),
        event1,
        event2,
        cens1: cens.map(|c| c.0),
        cens2: cens.map(|c| c.1),
        n1: n,
        n2: n,
        alpha: grid.alpha,
        replications,
        master_seed: seed,
        methods: Method::ALL.to_vec(),
    };
    cfg.validate()?;
    Ok(cfg)
}
