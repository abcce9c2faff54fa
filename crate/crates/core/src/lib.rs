//! Nonparametric two-sample comparison of right-censored survival data.
//!
//! The crate provides:
//!
//! - the survival data model ([`Observation`], [`TwoSampleDataset`]) and the
//!   Kaplan-Meier estimator ([`km`]);
//! - four classical tests: Gehan's generalized Wilcoxon, Cox-Mantel,
//!   log-rank and Peto-Peto ([`rank_tests`]);
//! - the composite Mann-Whitney test, which sums independent Mann-Whitney
//!   statistics over the uncensored and the censored subsamples
//!   ([`composite`]);
//! - parametric event/censoring families with crossing-point and censoring
//!   rate tools ([`distributions`]);
//! - a deterministic, parallel Monte Carlo engine for size and power studies
//!   ([`montecarlo`]);
//! - the four embedded reference datasets and CSV ingestion ([`datasets`]).
//!
//! ```
//! use survcomp::{datasets, run_method, Method};
//!
//! let ds = datasets::embedded(datasets::EmbeddedId::Gastric).unwrap();
//! let out = run_method(Method::Proposed, &ds).unwrap();
//! assert!(out.p_value < 0.01);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod composite;
pub mod datasets;
pub mod distributions;
mod error;
pub mod km;
pub mod montecarlo;
mod observation;
mod order;
mod outcome;
pub mod rank_tests;
pub mod special;

pub use composite::{proposed_test, CensoringPartition, CompositeMoments};
pub use error::{Error, Result};
pub use km::{km_fit, KmCurve, KmStep, Side};
pub use observation::{Group, Observation, TwoSampleDataset};
pub use order::{definitely_greater, Comparison};
pub use outcome::{Method, TestOutcome};
pub use rank_tests::{cox_mantel_test, gehan_test, logrank_test, peto_peto_test};

/// Runs a single test by tag.
pub fn run_method(method: Method, ds: &TwoSampleDataset) -> Result<TestOutcome> {
    match method {
        Method::Gehan => gehan_test(ds),
        Method::CoxMantel => cox_mantel_test(ds),
        Method::Logrank => logrank_test(ds),
        Method::PetoPeto => peto_peto_test(ds),
        Method::Proposed => proposed_test(ds),
    }
}
