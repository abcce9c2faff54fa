use crate::observation::Observation;

/// Outcome of comparing two possibly censored observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// The first observation's true time is known to exceed the second's.
    Greater,
    /// The second observation's true time is known to exceed the first's.
    Less,
    /// Censoring (or a tie between two events) leaves the order unknown.
    Indeterminate,
}

impl Comparison {
    /// +1, -1 or 0, the pairwise Gehan score.
    #[inline]
    pub fn score(self) -> i64 {
        match self {
            Comparison::Greater => 1,
            Comparison::Less => -1,
            Comparison::Indeterminate => 0,
        }
    }
}

/// Whether `a` is definitely greater than `b` under right-censoring.
///
/// `a` is greater when `b` is an event strictly before `a`'s time, or when
/// both share a time and only `b` is an event (a censored subject outlives an
/// event at the same recorded time).
#[inline]
pub fn definitely_greater(a: Observation, b: Observation) -> Comparison {
    if dominates(a, b) {
        Comparison::Greater
    } else if dominates(b, a) {
        Comparison::Less
    } else {
        Comparison::Indeterminate
    }
}

#[inline]
fn dominates(a: Observation, b: Observation) -> bool {
    b.is_event() && (a.time() > b.time() || (a.time() == b.time() && a.is_censored()))
}
