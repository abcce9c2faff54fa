use crate::error::{Error, Result};
use crate::observation::TwoSampleDataset;
use crate::outcome::{Method, TestOutcome};
use crate::special;

use super::risk::build_risk_table;

/// Observed and expected event counts per group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogrankSummary {
    pub observed1: f64,
    pub observed2: f64,
    pub expected1: f64,
    pub expected2: f64,
}

impl LogrankSummary {
    /// `(O1 - E1)^2 / E1 + (O2 - E2)^2 / E2`.
    pub fn chi_square(&self) -> Result<f64> {
        if !(self.expected1 > 0.0 && self.expected2 > 0.0) {
            return Err(Error::DegenerateExpectation(format!(
                "logrank: expected events E1 = {}, E2 = {}",
                self.expected1, self.expected2
            )));
        }
        let d1 = self.observed1 - self.expected1;
        let d2 = self.observed2 - self.expected2;
        Ok(d1 * d1 / self.expected1 + d2 * d2 / self.expected2)
    }
}

pub fn logrank_summary(ds: &TwoSampleDataset) -> Result<LogrankSummary> {
    let table = build_risk_table(ds)?;
    let mut s = LogrankSummary {
        observed1: 0.0,
        observed2: 0.0,
        expected1: 0.0,
        expected2: 0.0,
    };
    for row in &table.rows {
        let r = row.at_risk() as f64;
        let d = row.events as f64;
        s.observed1 += row.events1 as f64;
        s.observed2 += (row.events - row.events1) as f64;
        s.expected1 += row.at_risk1 as f64 * d / r;
        s.expected2 += row.at_risk2 as f64 * d / r;
    }
    Ok(s)
}

/// Log-rank test in its observed-versus-expected chi-square form, referred
/// to chi-square with one degree of freedom.
///
/// `statistic` and `standardized` both hold `X^2`; `null_expectation` and
/// `null_variance` are those of the chi-square(1) reference.
pub fn logrank_test(ds: &TwoSampleDataset) -> Result<TestOutcome> {
    let x2 = logrank_summary(ds)?.chi_square()?;
    Ok(TestOutcome {
        method: Method::Logrank,
        statistic: x2,
        null_expectation: 1.0,
        null_variance: 2.0,
        standardized: x2,
        p_value: special::chi2_1_sf(x2),
        small_sample: false,
    })
}
