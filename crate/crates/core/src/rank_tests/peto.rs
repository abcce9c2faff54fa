use crate::error::{Error, Result};
use crate::km::{km_fit, Side};
use crate::observation::TwoSampleDataset;
use crate::outcome::{Method, TestOutcome};

/// Peto-Peto scores for every pooled observation, group 1 first, from the
/// pooled Kaplan-Meier curve.
///
/// Events score `S(t-) + S(t) - 1`; censored observations score `S(t) - 1`
/// using the right-continuous value.
pub fn peto_scores(ds: &TwoSampleDataset) -> Result<Vec<f64>> {
    let pooled = ds.pooled_observations();
    let curve = km_fit(&pooled)?;
    Ok(pooled
        .iter()
        .map(|o| {
            let right = curve.eval(o.time(), Side::Right);
            if o.is_event() {
                curve.eval(o.time(), Side::Left) + right - 1.0
            } else {
                right - 1.0
            }
        })
        .collect())
}

pub fn peto_peto_test(ds: &TwoSampleDataset) -> Result<TestOutcome> {
    let scores = peto_scores(ds)?;
    let statistic: f64 = scores[..ds.n1()].iter().sum();
    let sum_sq: f64 = scores.iter().map(|s| s * s).sum();
    if !(sum_sq > 0.0) {
        return Err(Error::DegenerateVariance("peto_peto: every score is zero".into()));
    }
    let n1 = ds.n1() as f64;
    let n2 = ds.n2() as f64;
    let n = n1 + n2;
    TestOutcome::normal(Method::PetoPeto, statistic, 0.0, n1 * n2 / (n * (n - 1.0)) * sum_sq)
}
