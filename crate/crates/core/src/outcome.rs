use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gehan,
    CoxMantel,
    Logrank,
    PetoPeto,
    Proposed,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Gehan,
        Method::CoxMantel,
        Method::Logrank,
        Method::PetoPeto,
        Method::Proposed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gehan => "gehan",
            Method::CoxMantel => "cox_mantel",
            Method::Logrank => "logrank",
            Method::PetoPeto => "peto_peto",
            Method::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// Result of one two-sample test.
///
/// `standardized` is the z statistic for the normal-reference tests and the
/// chi-square value for the log-rank test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutcome {
    pub method: Method,
    pub statistic: f64,
    pub null_expectation: f64,
    pub null_variance: f64,
    pub standardized: f64,
    pub p_value: f64,
    /// Set when `min(n1, n2) < 10` and the test relies on a large-sample
    /// reference distribution that may be poor at this size.
    pub small_sample: bool,
}

impl TestOutcome {
    /// Standardizes `statistic` against a normal reference and reports a
    /// two-sided p-value.
    pub(crate) fn normal(method: Method, statistic: f64, null_expectation: f64, null_variance: f64) -> Result<Self> {
        if !(null_variance > 0.0) || !null_variance.is_finite() {
            return Err(Error::DegenerateVariance(format!(
                "{method}: null variance is {null_variance}"
            )));
        }
        let z = (statistic - null_expectation) / null_variance.sqrt();
        Ok(Self {
            method,
            statistic,
            null_expectation,
            null_variance,
            standardized: z,
            p_value: special::two_sided_p(z),
            small_sample: false,
        })
    }

    pub(crate) fn with_small_sample(mut self, flag: bool) -> Self {
        self.small_sample = flag;
        self
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}
