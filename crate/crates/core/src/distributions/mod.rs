//! Parametric event and censoring time families.
//!
//! Parametrizations:
//!
//! | family        | parameters                  | survival `S(t)`                          |
//! |---------------|-----------------------------|------------------------------------------|
//! | `exponential` | rate `r`                    | `exp(-r t)`                              |
//! | `weibull3`    | location μ, scale σ, shape λ | `exp(-((t - μ)/σ)^λ)` for `t > μ`, else 1 |
//! | `gamma`       | shape `k`, rate `β`         | `Q(k, β t)`                              |
//! | `lognormal`   | meanlog μ, sdlog σ          | `1 - Φ((ln t - μ)/σ)`                    |
//! | `loglogistic` | shape β, scale α            | `1 / (1 + (t/α)^β)`                      |
//! | `uniform`     | upper θ                     | `1 - t/θ` on `[0, θ]`                    |
//!
//! In configuration files a spec is written as a family name and a parameter
//! list, e.g. `{ family = "weibull3", params = [0.0, 2.0, 2.0] }`. The alias
//! `gamma_scale` takes `[shape, scale]` and is stored as a rate.

mod censoring;
mod crossing;
pub mod quadrature;
pub mod roots;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Distribution as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

pub use censoring::{calibrate_uniform_theta, censoring_fraction};
pub use crossing::{default_bracket, find_crossings, CrossingReport, CROSSING_GRID_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub enum DistributionSpec {
    Exponential { rate: f64 },
    Weibull3 { location: f64, scale: f64, shape: f64 },
    Gamma { shape: f64, rate: f64 },
    LogNormal { meanlog: f64, sdlog: f64 },
    LogLogistic { shape: f64, scale: f64 },
    Uniform { upper: f64 },
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self::Exponential {
            rate: positive("rate", rate)?,
        })
    }

    pub fn weibull3(location: f64, scale: f64, shape: f64) -> Result<Self> {
        if !(location >= 0.0 && location.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "location must be finite and >= 0, got {location}"
            )));
        }
        Ok(Self::Weibull3 {
            location,
            scale: positive("scale", scale)?,
            shape: positive("shape", shape)?,
        })
    }

    pub fn weibull(scale: f64, shape: f64) -> Result<Self> {
        Self::weibull3(0.0, scale, shape)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Ok(Self::Gamma {
            shape: positive("shape", shape)?,
            rate: positive("rate", rate)?,
        })
    }

    pub fn gamma_with_scale(shape: f64, scale: f64) -> Result<Self> {
        Self::gamma(shape, 1.0 / positive("scale", scale)?)
    }

    pub fn lognormal(meanlog: f64, sdlog: f64) -> Result<Self> {
        if !meanlog.is_finite() {
            return Err(Error::InvalidArgument(format!("meanlog must be finite, got {meanlog}")));
        }
        Ok(Self::LogNormal {
            meanlog,
            sdlog: positive("sdlog", sdlog)?,
        })
    }

    pub fn loglogistic(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self::LogLogistic {
            shape: positive("shape", shape)?,
            scale: positive("scale", scale)?,
        })
    }

    pub fn uniform(upper: f64) -> Result<Self> {
        Ok(Self::Uniform {
            upper: positive("upper", upper)?,
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Weibull3 { .. } => "weibull3",
            Self::Gamma { .. } => "gamma",
            Self::LogNormal { .. } => "lognormal",
            Self::LogLogistic { .. } => "loglogistic",
            Self::Uniform { .. } => "uniform",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Exponential { rate } => vec![rate],
            Self::Weibull3 { location, scale, shape } => vec![location, scale, shape],
            Self::Gamma { shape, rate } => vec![shape, rate],
            Self::LogNormal { meanlog, sdlog } => vec![meanlog, sdlog],
            Self::LogLogistic { shape, scale } => vec![shape, scale],
            Self::Uniform { upper } => vec![upper],
        }
    }

    pub fn from_family(family: &str, params: &[f64]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{family} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match family {
            "exponential" => want(1).and_then(|_| Self::exponential(params[0])),
            "weibull3" => want(3).and_then(|_| Self::weibull3(params[0], params[1], params[2])),
            "gamma" => want(2).and_then(|_| Self::gamma(params[0], params[1])),
            "gamma_scale" => want(2).and_then(|_| Self::gamma_with_scale(params[0], params[1])),
            "lognormal" => want(2).and_then(|_| Self::lognormal(params[0], params[1])),
            "loglogistic" => want(2).and_then(|_| Self::loglogistic(params[0], params[1])),
            "uniform" => want(1).and_then(|_| Self::uniform(params[0])),
            other => Err(Error::InvalidArgument(format!("unknown distribution family `{other}`"))),
        }
    }

    /// Lower end of the support.
    pub fn support_start(&self) -> f64 {
        match *self {
            Self::Weibull3 { location, .. } => location,
            _ => 0.0,
        }
    }

    pub fn survival(&self, t: f64) -> f64 {
        if t <= self.support_start() {
            return 1.0;
        }
        match *self {
            Self::Exponential { rate } => (-rate * t).exp(),
            Self::Weibull3 { location, scale, shape } => (-((t - location) / scale).powf(shape)).exp(),
            Self::Gamma { shape, rate } => special::gamma_q(shape, rate * t),
            Self::LogNormal { meanlog, sdlog } => special::normal_sf((t.ln() - meanlog) / sdlog),
            Self::LogLogistic { shape, scale } => 1.0 / (1.0 + (t / scale).powf(shape)),
            Self::Uniform { upper } => (1.0 - t / upper).max(0.0),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.support_start() {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => -(-rate * t).exp_m1(),
            Self::Weibull3 { location, scale, shape } => -(-((t - location) / scale).powf(shape)).exp_m1(),
            Self::Gamma { shape, rate } => special::gamma_p(shape, rate * t),
            Self::LogNormal { meanlog, sdlog } => special::normal_cdf((t.ln() - meanlog) / sdlog),
            Self::LogLogistic { shape, scale } => {
                let r = (t / scale).powf(shape);
                r / (1.0 + r)
            }
            Self::Uniform { upper } => (t / upper).min(1.0),
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        if t < self.support_start() {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => rate * (-rate * t).exp(),
            Self::Weibull3 { location, scale, shape } => {
                let z = (t - location) / scale;
                if z == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        0.0
                    };
                }
                shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Self::Gamma { shape, rate } => {
                if t == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        rate
                    } else {
                        0.0
                    };
                }
                (shape * rate.ln() + (shape - 1.0) * t.ln() - rate * t - statrs::function::gamma::ln_gamma(shape)).exp()
            }
            Self::LogNormal { meanlog, sdlog } => {
                if t == 0.0 {
                    return 0.0;
                }
                let z = (t.ln() - meanlog) / sdlog;
                (-0.5 * z * z).exp() / (t * sdlog * (2.0 * std::f64::consts::PI).sqrt())
            }
            Self::LogLogistic { shape, scale } => {
                let z = t / scale;
                let r = z.powf(shape);
                if t == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        0.0
                    };
                }
                shape / scale * z.powf(shape - 1.0) / ((1.0 + r) * (1.0 + r))
            }
            Self::Uniform { upper } => {
                if t <= upper {
                    1.0 / upper
                } else {
                    0.0
                }
            }
        }
    }

    /// The `p`-quantile, `p` in (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "quantile level must be in (0, 1), got {p}"
            )));
        }
        Ok(match *self {
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Weibull3 { location, scale, shape } => location + scale * (-(-p).ln_1p()).powf(1.0 / shape),
            Self::Gamma { .. } => self.invert_cdf(p),
            Self::LogNormal { meanlog, sdlog } => (meanlog + sdlog * special::normal_quantile(p)).exp(),
            Self::LogLogistic { shape, scale } => scale * (p / (1.0 - p)).powf(1.0 / shape),
            Self::Uniform { upper } => p * upper,
        })
    }

    /// Numerical inverse of the CDF to full double precision.
    fn invert_cdf(&self, p: f64) -> f64 {
        let start = self.support_start();
        let mut hi = start + 1.0;
        while self.cdf(hi) < p {
            hi = start + 2.0 * (hi - start);
        }
        // work on whichever tail is represented more accurately
        let f = |x: f64| {
            if p < 0.5 {
                self.cdf(x) - p
            } else {
                (1.0 - p) - self.survival(x)
            }
        };
        roots::bisect(f, start, hi, 0.0).expect("cdf brackets every level in (0, 1)")
    }

    /// One draw. Inverse-transform sampling except for the gamma and
    /// lognormal families.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Gamma { shape, rate } => rand_distr::Gamma::new(shape, 1.0 / rate)
                .expect("validated gamma parameters")
                .sample(rng),
            Self::LogNormal { meanlog, sdlog } => rand_distr::LogNormal::new(meanlog, sdlog)
                .expect("validated lognormal parameters")
                .sample(rng),
            _ => self.time_at_survival(open_closed_unit(rng)),
        }
    }

    /// `n` draws from the stream.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        self.sample_into(n, rng, &mut out);
        out
    }

    /// Appends `n` draws to `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, n: usize, rng: &mut R, out: &mut Vec<f64>) {
        match *self {
            Self::Gamma { shape, rate } => {
                let d = rand_distr::Gamma::new(shape, 1.0 / rate).expect("validated gamma parameters");
                out.extend((0..n).map(|_| d.sample(rng)));
            }
            Self::LogNormal { meanlog, sdlog } => {
                let d = rand_distr::LogNormal::new(meanlog, sdlog).expect("validated lognormal parameters");
                out.extend((0..n).map(|_| d.sample(rng)));
            }
            _ => out.extend((0..n).map(|_| self.time_at_survival(open_closed_unit(rng)))),
        }
    }

    /// Maps a survival level `u` in (0, 1] to the time with `S(t) = u`.
    fn time_at_survival(&self, u: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => -u.ln() / rate,
            Self::Weibull3 { location, scale, shape } => location + scale * (-u.ln()).powf(1.0 / shape),
            Self::LogLogistic { shape, scale } => scale * ((1.0 - u) / u).powf(1.0 / shape),
            Self::Uniform { upper } => upper * (1.0 - u),
            Self::Gamma { .. } | Self::LogNormal { .. } => unreachable!("sampled directly"),
        }
    }
}

#[inline]
fn open_closed_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.family(), params.join(", "))
    }
}

/// Parses the `Display` form, `family(p1, p2, ...)`.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected family(p1, p2, ...), got {s:?}"));
        let (family, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let params = inner
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_family(family.trim(), &params)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    family: String,
    params: Vec<f64>,
}

impl TryFrom<SpecRepr> for DistributionSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        DistributionSpec::from_family(&r.family, &r.params)
    }
}

impl From<DistributionSpec> for SpecRepr {
    fn from(d: DistributionSpec) -> Self {
        SpecRepr {
            family: d.family().to_string(),
            params: d.params(),
        }
    }
}
