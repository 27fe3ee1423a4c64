//! Normality, rank-correlation and one-way variance tests.

mod anova;
mod rank;
mod shapiro;
pub mod special;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use anova::one_way_anova;
pub use rank::{pearson, rank_with_ties, spearman, EXACT_SPEARMAN_MAX_N};
pub use shapiro::shapiro_wilk;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("input contains NaN")]
    NaNInput,
    #[error("input contains an infinite value")]
    NonFiniteInput,
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("a sequence is constant, so the statistic is undefined")]
    DegenerateInput,
    #[error("sample of size {n} is too small (minimum {min})")]
    SampleTooSmall { n: usize, min: usize },
    #[error("sample of size {n} is too large (maximum {max})")]
    SampleTooLarge { n: usize, max: usize },
    #[error("all sample values are equal")]
    ConstantSample,
    #[error("need at least two non-empty groups and more observations than groups")]
    InsufficientGroups,
    #[error("every group is internally constant; within-group variance is zero")]
    ZeroWithinVariance,
    #[error("distribution function argument out of domain")]
    DomainError,
    #[error("continued fraction did not converge")]
    NoConvergence,
}

/// Degrees of freedom attached to a test result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreesOfFreedom {
    One(u64),
    Two(u64, u64),
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: String,
    pub statistic: f64,
    pub p_value: f64,
    pub df: Option<DegreesOfFreedom>,
    pub n: usize,
}

/// Samples keyed by group label. Only groups that received at least one
/// value exist.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSamples<K: Ord> {
    groups: BTreeMap<K, Vec<f64>>,
}

impl<K: Ord> Default for GroupedSamples<K> {
    fn default() -> Self {
        GroupedSamples {
            groups: BTreeMap::new(),
        }
    }
}

impl<K: Ord> GroupedSamples<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: K, value: f64) {
        self.groups.entry(key).or_default().push(value);
    }

    pub fn groups(&self) -> &BTreeMap<K, Vec<f64>> {
        &self.groups
    }

    pub fn get(&self, key: &K) -> Option<&[f64]> {
        self.groups.get(key).map(Vec::as_slice)
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn total(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }
}

impl<K: Ord> FromIterator<(K, Vec<f64>)> for GroupedSamples<K> {
    /// Empty value lists are skipped, so every resulting group is non-empty.
    fn from_iter<I: IntoIterator<Item = (K, Vec<f64>)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (k, values) in iter {
            if !values.is_empty() {
                out.groups.entry(k).or_default().extend(values);
            }
        }
        out
    }
}

pub(crate) fn check_finite(x: &[f64]) -> Result<(), StatsError> {
    for v in x {
        if v.is_nan() {
            return Err(StatsError::NaNInput);
        }
        if v.is_infinite() {
            return Err(StatsError::NonFiniteInput);
        }
    }
    Ok(())
}
