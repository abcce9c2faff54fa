use crate::error::{Error, Result};

/// One subject: observed time and whether the event was observed (`true`)
/// or the subject was right-censored (`false`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    time: f64,
    event: bool,
}

impl Observation {
    pub fn new(time: f64, event: bool) -> Result<Self> {
        if !time.is_finite() || time < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "observation time must be finite and >= 0, got {time}"
            )));
        }
        Ok(Self { time, event })
    }

    /// An observed event at `time`.
    ///
    /// Panics if `time` is negative or not finite.
    pub fn event(time: f64) -> Self {
        Self::new(time, true).expect("valid event time")
    }

    /// A right-censored observation at `time`.
    ///
    /// Panics if `time` is negative or not finite.
    pub fn censored(time: f64) -> Self {
        Self::new(time, false).expect("valid censoring time")
    }

    #[inline]
    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn is_event(&self) -> bool {
        self.event
    }

    #[inline]
    pub fn is_censored(&self) -> bool {
        !self.event
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    One,
    Two,
}

/// Two labeled groups of observations. Both groups are non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleDataset {
    group1: Vec<Observation>,
    group2: Vec<Observation>,
}

impl TwoSampleDataset {
    pub fn new(group1: Vec<Observation>, group2: Vec<Observation>) -> Result<Self> {
        if group1.is_empty() {
            return Err(Error::EmptyGroup(1));
        }
        if group2.is_empty() {
            return Err(Error::EmptyGroup(2));
        }
        Ok(Self { group1, group2 })
    }

    /// Builds a dataset from `(time, event)` pairs.
    pub fn from_pairs(group1: &[(f64, bool)], group2: &[(f64, bool)]) -> Result<Self> {
        let conv = |xs: &[(f64, bool)]| -> Result<Vec<Observation>> {
            xs.iter().map(|&(t, e)| Observation::new(t, e)).collect()
        };
        Self::new(conv(group1)?, conv(group2)?)
    }

    pub fn group1(&self) -> &[Observation] {
        &self.group1
    }

    pub fn group2(&self) -> &[Observation] {
        &self.group2
    }

    pub fn group(&self, g: Group) -> &[Observation] {
        match g {
            Group::One => &self.group1,
            Group::Two => &self.group2,
        }
    }

    pub fn n1(&self) -> usize {
        self.group1.len()
    }

    pub fn n2(&self) -> usize {
        self.group2.len()
    }

    pub fn len(&self) -> usize {
        self.group1.len() + self.group2.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All observations, group 1 first, each tagged with its group.
    pub fn pooled(&self) -> impl Iterator<Item = (Group, Observation)> + '_ {
        self.group1
            .iter()
            .map(|&o| (Group::One, o))
            .chain(self.group2.iter().map(|&o| (Group::Two, o)))
    }

    /// Pooled observations without labels, group 1 first.
    pub fn pooled_observations(&self) -> Vec<Observation> {
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.group1);
        v.extend_from_slice(&self.group2);
        v
    }

    /// The same data with the group labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            group1: self.group2.clone(),
            group2: self.group1.clone(),
        }
    }

    pub fn event_count(&self) -> usize {
        self.pooled().filter(|(_, o)| o.is_event()).count()
    }
}
