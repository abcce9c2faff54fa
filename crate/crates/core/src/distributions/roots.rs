//! Bracketing root finder.

use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket.
///
/// Stops once the bracket is no wider than `xtol` or can no longer be
/// halved in floating point. Returns the midpoint of the final bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("bisect: empty bracket [{lo}, {hi}]")));
    }
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidArgument(format!(
            "bisect: no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
}
