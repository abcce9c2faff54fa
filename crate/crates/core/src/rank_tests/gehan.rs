use crate::error::{Error, Result};
use crate::observation::{Observation, TwoSampleDataset};
use crate::outcome::{Method, TestOutcome};

/// Gehan ranks of one pooled observation.
///
/// `r1` is one plus the number of pooled observations it is definitely
/// greater than; `r2` is one plus the number definitely greater than it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GehanRankRow {
    pub r1: u64,
    pub r2: u64,
}

impl GehanRankRow {
    /// `r1 - r2`, the observation's score against the whole pooled sample.
    #[inline]
    pub fn score(&self) -> i64 {
        self.r1 as i64 - self.r2 as i64
    }
}

/// Sorted views of the pooled sample used to count dominance relations in
/// `O(log N)` per observation.
struct Index {
    all: Vec<f64>,
    events: Vec<f64>,
    censored: Vec<f64>,
}

impl Index {
    fn new(pooled: &[Observation]) -> Self {
        let mut all: Vec<f64> = pooled.iter().map(|o| o.time()).collect();
        let mut events: Vec<f64> = pooled.iter().filter(|o| o.is_event()).map(|o| o.time()).collect();
        let mut censored: Vec<f64> = pooled.iter().filter(|o| o.is_censored()).map(|o| o.time()).collect();
        all.sort_by(f64::total_cmp);
        events.sort_by(f64::total_cmp);
        censored.sort_by(f64::total_cmp);
        Self { all, events, censored }
    }

    fn row(&self, o: Observation) -> GehanRankRow {
        let t = o.time();
        let events_before = self.events.partition_point(|&x| x < t);
        let greater_than = if o.is_event() {
            events_before
        } else {
            // a censored subject also outlives events recorded at its own time
            self.events.partition_point(|&x| x <= t)
        };
        let less_than = if o.is_event() {
            let later = self.all.len() - self.all.partition_point(|&x| x <= t);
            let censored_here = self.censored.partition_point(|&x| x <= t) - self.censored.partition_point(|&x| x < t);
            later + censored_here
        } else {
            0
        };
        GehanRankRow {
            r1: 1 + greater_than as u64,
            r2: 1 + less_than as u64,
        }
    }
}

/// Gehan ranks for every pooled observation, group 1 first.
pub fn gehan_ranks(ds: &TwoSampleDataset) -> Vec<GehanRankRow> {
    let pooled = ds.pooled_observations();
    let index = Index::new(&pooled);
    pooled.iter().map(|&o| index.row(o)).collect()
}

/// Gehan's generalized Wilcoxon test.
///
/// The statistic is the sum of pairwise scores over all cross-group pairs
/// (+1 when the group-1 member is definitely greater). Pairs within a group
/// cancel, so it equals the sum of `r1 - r2` over group 1.
pub fn gehan_test(ds: &TwoSampleDataset) -> Result<TestOutcome> {
    let ranks = gehan_ranks(ds);
    let statistic: i64 = ranks[..ds.n1()].iter().map(GehanRankRow::score).sum();
    let sum_sq: i64 = ranks.iter().map(|r| r.score() * r.score()).sum();

    let n1 = ds.n1() as f64;
    let n2 = ds.n2() as f64;
    let n = n1 + n2;
    let variance = n1 * n2 / (n * (n - 1.0)) * sum_sq as f64;
    if sum_sq == 0 {
        return Err(Error::DegenerateVariance(
            "gehan: every pairwise comparison is indeterminate".into(),
        ));
    }
    TestOutcome::normal(Method::Gehan, statistic as f64, 0.0, variance)
}
