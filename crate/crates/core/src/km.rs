//! Kaplan-Meier product-limit estimator.
//!
//! At a time shared by events and censorings, events are processed first:
//! subjects censored at `t` are still at risk at `t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::observation::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KmStep {
    pub time: f64,
    pub at_risk: usize,
    pub events: usize,
    /// Survival probability just after `time`.
    pub survival: f64,
}

/// A right-continuous step function starting at 1. Steps exist only at event
/// times; when the last subject is censored the curve ends above zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct KmCurve {
    pub steps: Vec<KmStep>,
}

/// Which one-sided limit to take when evaluating a step function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `S(t-)`, the value just before any step at exactly `t`.
    Left,
    /// `S(t)`, right-continuous.
    Right,
}

pub fn km_fit(observations: &[Observation]) -> Result<KmCurve> {
    if observations.is_empty() {
        return Err(Error::InvalidArgument(
            "Kaplan-Meier fit needs at least one observation".into(),
        ));
    }
    let mut sorted: Vec<Observation> = observations.to_vec();
    sorted.sort_by(|a, b| a.time().total_cmp(&b.time()));

    let n = sorted.len();
    let mut steps = Vec::new();
    let mut survival = 1.0;
    let mut i = 0;
    while i < n {
        let t = sorted[i].time();
        let at_risk = n - i;
        let mut j = i;
        let mut events = 0;
        while j < n && sorted[j].time() == t {
            events += usize::from(sorted[j].is_event());
            j += 1;
        }
        if events > 0 {
            survival *= 1.0 - events as f64 / at_risk as f64;
            steps.push(KmStep {
                time: t,
                at_risk,
                events,
                survival,
            });
        }
        i = j;
    }
    Ok(KmCurve { steps })
}

impl KmCurve {
    pub fn eval(&self, t: f64, side: Side) -> f64 {
        // number of steps at or before t (Right) / strictly before t (Left)
        let k = match side {
            Side::Right => self.steps.partition_point(|s| s.time <= t),
            Side::Left => self.steps.partition_point(|s| s.time < t),
        };
        if k == 0 {
            1.0
        } else {
            self.steps[k - 1].survival
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Survival after the last step (1 when there are no events).
    pub fn final_survival(&self) -> f64 {
        self.steps.last().map_or(1.0, |s| s.survival)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn obs(xs: &[(f64, bool)]) -> Vec<Observation> {
        xs.iter().map(|&(t, e)| Observation::new(t, e).unwrap()).collect()
    }

    #[test]
    fn product_limit_arithmetic() {
        let c = km_fit(&obs(&[(1.0, true), (2.0, false), (3.0, true)])).unwrap();
        assert_eq!(c.steps.len(), 2);
        assert_eq!((c.steps[0].time, c.steps[0].at_risk, c.steps[0].events), (1.0, 3, 1));
        assert!((c.steps[0].survival - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!((c.steps[1].time, c.steps[1].at_risk, c.steps[1].events), (3.0, 1, 1));
        assert_eq!(c.steps[1].survival, 0.0);
    }

    #[test]
    fn all_censored_has_no_steps() {
        let c = km_fit(&obs(&[(1.0, false), (4.0, false)])).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.eval(10.0, Side::Right), 1.0);
        assert_eq!(c.final_survival(), 1.0);
    }

    #[test]
    fn single_subject() {
        let c = km_fit(&obs(&[(5.0, true)])).unwrap();
        assert_eq!(
            c.steps,
            vec![KmStep {
                time: 5.0,
                at_risk: 1,
                events: 1,
                survival: 0.0
            }]
        );
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(km_fit(&[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn events_before_censorings_at_tie() {
        // censored at 2 is still at risk at 2
        let c = km_fit(&obs(&[(2.0, false), (2.0, true), (3.0, true)])).unwrap();
        assert_eq!(c.steps[0].at_risk, 3);
        assert!((c.steps[0].survival - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.steps[1].at_risk, 1);
    }

    #[test]
    fn last_censored_ends_above_zero() {
        let c = km_fit(&obs(&[(1.0, true), (2.0, false)])).unwrap();
        assert_eq!(c.final_survival(), 0.5);
    }

    #[test]
    fn eval_sides() {
        let c = km_fit(&obs(&[(1.0, true), (2.0, false), (3.0, true)])).unwrap();
        assert_eq!(c.eval(1.0, Side::Left), 1.0);
        assert!((c.eval(1.0, Side::Right) - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.eval(2.0, Side::Left) - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.eval(2.0, Side::Right) - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.eval(3.0, Side::Left) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.eval(3.0, Side::Right), 0.0);
        assert_eq!(c.eval(0.0, Side::Right), 1.0);
    }

    fn sample() -> impl Strategy<Value = Vec<(u8, bool)>> {
        prop::collection::vec((0u8..12, any::<bool>()), 1..25)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn monotone_and_bounded(xs in sample()) {
            let o: Vec<_> = xs.iter().map(|&(t, e)| Observation::new(t as f64, e).unwrap()).collect();
            let c = km_fit(&o).unwrap();
            let mut prev = 1.0;
            let mut prev_t = f64::NEG_INFINITY;
            let mut prev_risk = usize::MAX;
            let mut product = 1.0;
            for s in &c.steps {
                prop_assert!(s.time > prev_t);
                prop_assert!(s.at_risk < prev_risk);
                prop_assert!(s.survival <= prev && (0.0..=1.0).contains(&s.survival));
                product *= 1.0 - s.events as f64 / s.at_risk as f64;
                prop_assert!((product - s.survival).abs() < 1e-12);
                prev = s.survival;
                prev_t = s.time;
                prev_risk = s.at_risk;
            }
        }

        // Without censoring the KM curve is 1 - ECDF, evaluated right-continuously.
        #[test]
        fn uncensored_equals_empirical(ts in prop::collection::vec(0u8..12, 1..25), probe in 0u8..14) {
            let o: Vec<_> = ts.iter().map(|&t| Observation::event(t as f64)).collect();
            let c = km_fit(&o).unwrap();
            let t = probe as f64;
            let ecdf = ts.iter().filter(|&&x| (x as f64) <= t).count() as f64 / ts.len() as f64;
            prop_assert!((c.eval(t, Side::Right) - (1.0 - ecdf)).abs() < 1e-12);
        }

        #[test]
        fn right_eval_flat_between_steps(xs in sample(), frac in 0.0f64..1.0) {
            let o: Vec<_> = xs.iter().map(|&(t, e)| Observation::new(t as f64, e).unwrap()).collect();
            let c = km_fit(&o).unwrap();
            for w in c.steps.windows(2) {
                let a = w[0].time;
                let b = w[1].time;
                let mid = a + frac * (b - a);
                prop_assert_eq!(c.eval(mid, Side::Right), c.eval(a, Side::Right));
            }
        }
    }
}
