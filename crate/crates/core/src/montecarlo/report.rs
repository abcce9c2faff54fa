//! Tabular and JSON study reports.

use std::fmt::Write as _;

use serde::Serialize;

use super::{AcceptanceInterval, StudyResult};
use crate::outcome::Method;

/// Version tag written into every JSON report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const TSV_COLUMNS: [&str; 7] = [
    "method",
    "scenario",
    "rejections",
    "replications",
    "rate",
    "mc_se",
    "degenerate_count",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub method: Method,
    pub scenario: String,
    pub rejections: u64,
    pub replications: u64,
    pub rate: Option<f64>,
    pub mc_se: Option<f64>,
    pub degenerate_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub id: String,
    pub alpha: f64,
    pub replications: u64,
    /// Realized fraction of censored subjects in each group.
    pub censoring_fraction: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    /// `size`, `power` or `custom`.
    pub kind: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_interval: Option<AcceptanceInterval>,
    pub scenarios: Vec<ScenarioSummary>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(kind: &str, seed: u64, results: &[StudyResult], interval: Option<AcceptanceInterval>) -> Self {
        let scenarios = results
            .iter()
            .map(|r| ScenarioSummary {
                id: r.scenario_id.clone(),
                alpha: r.alpha,
                replications: r.replications,
                censoring_fraction: r.censoring_fraction(),
            })
            .collect();
        let rows = results
            .iter()
            .flat_map(|r| {
                r.methods.iter().map(move |m| ReportRow {
                    method: m.method,
                    scenario: r.scenario_id.clone(),
                    rejections: m.rejections,
                    replications: m.replications,
                    rate: m.rate,
                    mc_se: m.mc_se,
                    degenerate_count: m.degenerate_count,
                })
            })
            .collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            kind: kind.to_string(),
            seed,
            acceptance_interval: interval,
            scenarios,
            rows,
        }
    }

    /// Tab-separated rows with a header; unusable rates are written `NA`.
    pub fn to_tsv(&self) -> String {
        let mut out = TSV_COLUMNS.join("\t");
        out.push('\n');
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.method,
                r.scenario,
                r.rejections,
                r.replications,
                opt(r.rate),
                opt(r.mc_se),
                r.degenerate_count
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
