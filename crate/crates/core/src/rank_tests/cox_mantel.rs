use crate::error::{Error, Result};
use crate::observation::TwoSampleDataset;
use crate::outcome::{Method, TestOutcome};

use super::risk::build_risk_table;

/// Cox-Mantel test: observed group-2 events minus their hypergeometric
/// expectation over the pooled event times.
pub fn cox_mantel_test(ds: &TwoSampleDataset) -> Result<TestOutcome> {
    let table = build_risk_table(ds)?;
    let f2 = ds.group2().iter().filter(|o| o.is_event()).count() as f64;

    let mut expected = 0.0;
    let mut variance = 0.0;
    for row in &table.rows {
        let r = row.at_risk() as f64;
        let m = row.events as f64;
        let p = row.at_risk2 as f64 / r;
        expected += m * p;
        // r == 1 implies m == r, a 0/0 row that contributes nothing
        if row.at_risk() > 1 {
            variance += m * (r - m) / (r - 1.0) * p * (1.0 - p);
        }
    }
    if !(variance > 0.0) {
        return Err(Error::DegenerateVariance(
            "cox_mantel: every risk set is single-group or fully failing".into(),
        ));
    }
    TestOutcome::normal(Method::CoxMantel, f2 - expected, 0.0, variance)
}
