use alloc::string::String;

use super::special::f_upper_tail;
use super::{check_finite, DegreesOfFreedom, GroupedSamples, StatsError, TestResult};

/// One-way analysis of variance across the groups of `samples`.
///
/// `F = (SSB / (k - 1)) / (SSW / (N - k))` with the upper-tail p-value of the
/// F distribution on `(k - 1, N - k)` degrees of freedom.
pub fn one_way_anova<K: Ord>(samples: &GroupedSamples<K>) -> Result<TestResult, StatsError> {
    let groups = samples.groups();
    let k = groups.len();
    let total = samples.total();
    if k < 2 || total <= k {
        return Err(StatsError::InsufficientGroups);
    }
    for g in groups.values() {
        check_finite(g)?;
    }
    if groups.values().all(|g| g.iter().all(|v| *v == g[0])) {
        return Err(StatsError::ZeroWithinVariance);
    }

    let grand_mean = groups.values().flatten().sum::<f64>() / total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups.values() {
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ss_between += g.len() as f64 * (mean - grand_mean) * (mean - grand_mean);
        ss_within += g.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    }
    let df_between = (k - 1) as f64;
    let df_within = (total - k) as f64;
    let f = (ss_between / df_between) / (ss_within / df_within);
    let p_value = f_upper_tail(f, df_between, df_within)?;

    Ok(TestResult {
        method: String::from("one-way anova"),
        statistic: f,
        p_value: p_value.clamp(0.0, 1.0),
        df: Some(DegreesOfFreedom::Two((k - 1) as u64, (total - k) as u64)),
        n: total,
    })
}
