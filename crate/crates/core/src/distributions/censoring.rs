use crate::error::{Error, Result};

use super::quadrature::{integrate, integrate_unit};
use super::roots::bisect;
use super::DistributionSpec;

const QUAD_TOL: f64 = 1e-10;

/// Probability that the censoring time falls before the event time,
/// `P(C < T) = ∫ f_C(c) S_T(c) dc`.
///
/// Integrated over censoring quantile levels, `∫_0^1 S_T(Q_C(u)) du`, which
/// keeps the integrand bounded for every family.
pub fn censoring_fraction(event: &DistributionSpec, cens: &DistributionSpec) -> f64 {
    if let DistributionSpec::Uniform { upper } = *cens {
        return uniform_fraction(event, upper);
    }
    let start = event.survival(cens.support_start());
    integrate_unit(
        |u| match cens.quantile(u) {
            Ok(c) => event.survival(c),
            // deep subdivision can round a node onto an endpoint
            Err(_) if u <= 0.0 => start,
            Err(_) => 0.0,
        },
        QUAD_TOL,
    )
    .value
}

fn uniform_fraction(event: &DistributionSpec, upper: f64) -> f64 {
    // (1/θ) ∫_0^θ S_T(c) dc, with the integrable part near zero resolved
    let mut total = 0.0;
    let mut hi = upper;
    for _ in 0..40 {
        let lo = hi / 8.0;
        total += integrate(|c| event.survival(c), lo, hi, QUAD_TOL * upper / 40.0).value;
        hi = lo;
    }
    total += integrate(|c| event.survival(c), 0.0, hi, QUAD_TOL * upper / 40.0).value;
    total / upper
}

/// The `θ` for which `Uniform(0, θ)` censoring censors a `target` fraction
/// of `event` times.
pub fn calibrate_uniform_theta(event: &DistributionSpec, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target censoring fraction must be in (0, 1), got {target}"
        )));
    }
    let frac = |theta: f64| uniform_fraction(event, theta);

    // the fraction decreases from 1 (θ → 0) towards 0 (θ → ∞)
    let mut hi = 1.0;
    while frac(hi) > target {
        hi *= 2.0;
        if hi > 1e15 {
            return Err(Error::CalibrationFailure(format!(
                "no θ up to 1e15 brings censoring below {target}"
            )));
        }
    }
    let mut lo = hi / 2.0;
    while frac(lo) < target {
        lo /= 2.0;
        if lo < 1e-15 {
            return Err(Error::CalibrationFailure(format!(
                "no θ down to 1e-15 brings censoring above {target}"
            )));
        }
    }
    let theta = bisect(|th| frac(th) - target, lo, hi, hi * 1e-12)?;
    let achieved = frac(theta);
    if (achieved - target).abs() > 1e-4 {
        return Err(Error::CalibrationFailure(format!(
            "θ = {theta} gives {achieved}, target {target}"
        )));
    }
    Ok(theta)
}
