use serde::Serialize;

use super::roots::bisect;
use super::DistributionSpec;

/// Points in the sign scan of `S_a - S_b`.
pub const CROSSING_GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingReport {
    pub times: Vec<f64>,
    pub bracket: (f64, f64),
    /// Largest final bisection interval width over the reported roots.
    pub tolerance: f64,
}

impl CrossingReport {
    pub fn count(&self) -> usize {
        self.times.len()
    }
}

/// Scan bracket for two survival curves: from just past the later support
/// start to the larger 0.999-quantile.
pub fn default_bracket(a: &DistributionSpec, b: &DistributionSpec) -> (f64, f64) {
    let lo = a.support_start().max(b.support_start()) + 1e-9;
    let hi = a
        .quantile(0.999)
        .expect("0.999 is a valid level")
        .max(b.quantile(0.999).expect("0.999 is a valid level"));
    (lo, hi)
}

/// Times in `bracket` where the survival curves of `a` and `b` cross.
///
/// `S_a - S_b` is evaluated on a uniform grid; every cell where the sign
/// changes (exact zeros are skipped) is refined by bisection until the cell
/// is narrower than `tol`.
pub fn find_crossings(a: &DistributionSpec, b: &DistributionSpec, bracket: (f64, f64), tol: f64) -> CrossingReport {
    let (lo, hi) = bracket;
    let diff = |t: f64| a.survival(t) - b.survival(t);
    let mut report = CrossingReport {
        times: Vec::new(),
        bracket,
        tolerance: 0.0,
    };
    if !(lo < hi) || !(tol > 0.0) {
        return report;
    }
    let step = (hi - lo) / (CROSSING_GRID_POINTS - 1) as f64;
    let mut last: Option<(f64, f64)> = None;
    for i in 0..CROSSING_GRID_POINTS {
        let t = if i + 1 == CROSSING_GRID_POINTS {
            hi
        } else {
            lo + step * i as f64
        };
        let d = diff(t);
        if d == 0.0 || d.is_nan() {
            continue;
        }
        if let Some((t0, d0)) = last {
            if d0.signum() != d.signum() {
                let root = bisect(diff, t0, t, tol * 1e-3).expect("cell brackets a sign change");
                report.times.push(root);
                report.tolerance = report.tolerance.max(tol * 1e-3);
            }
        }
        last = Some((t, d));
    }
    report
}
