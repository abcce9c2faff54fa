use crate::error::{Error, Result};
use crate::observation::{Group, TwoSampleDataset};

/// One distinct pooled event time with the events there and the number at
/// risk in each group just before it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskRow {
    pub time: f64,
    /// Total events at `time` (both groups).
    pub events: usize,
    /// Group-1 events at `time`.
    pub events1: usize,
    pub at_risk1: usize,
    pub at_risk2: usize,
}

impl RiskRow {
    #[inline]
    pub fn at_risk(&self) -> usize {
        self.at_risk1 + self.at_risk2
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RiskTable {
    pub rows: Vec<RiskRow>,
}

/// Builds the pooled risk table. A subject censored at exactly an event time
/// is counted at risk at that time.
pub fn build_risk_table(ds: &TwoSampleDataset) -> Result<RiskTable> {
    let mut pooled: Vec<(f64, bool, Group)> = ds.pooled().map(|(g, o)| (o.time(), o.is_event(), g)).collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut at_risk1 = ds.n1();
    let mut at_risk2 = ds.n2();
    let mut rows = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let t = pooled[i].0;
        let (mut d, mut d1, mut leave1, mut leave2) = (0, 0, 0, 0);
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == t {
            let (_, event, g) = pooled[j];
            match g {
                Group::One => {
                    leave1 += 1;
                    if event {
                        d += 1;
                        d1 += 1;
                    }
                }
                Group::Two => {
                    leave2 += 1;
                    d += usize::from(event);
                }
            }
            j += 1;
        }
        if d > 0 {
            rows.push(RiskRow {
                time: t,
                events: d,
                events1: d1,
                at_risk1,
                at_risk2,
            });
        }
        at_risk1 -= leave1;
        at_risk2 -= leave2;
        i = j;
    }
    if rows.is_empty() {
        return Err(Error::NoEvents);
    }
    Ok(RiskTable { rows })
}
