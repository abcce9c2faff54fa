//! The four classical two-sample tests for right-censored data.
//!
//! Group 1 is the reference orientation throughout: a positive Gehan or
//! Peto-Peto statistic means group 1 tends to survive longer, a positive
//! Cox-Mantel statistic means group 2 had more events than expected.

mod cox_mantel;
mod gehan;
mod logrank;
mod peto;
mod risk;

pub use cox_mantel::cox_mantel_test;
pub use gehan::{gehan_ranks, gehan_test, GehanRankRow};
pub use logrank::{logrank_summary, logrank_test, LogrankSummary};
pub use peto::{peto_peto_test, peto_scores};
pub use risk::{build_risk_table, RiskRow, RiskTable};
