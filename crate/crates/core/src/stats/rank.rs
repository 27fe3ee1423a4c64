use alloc::string::String;
use alloc::vec::Vec;

use crate::math;

use super::special::student_t_two_sided;
use super::{check_finite, DegreesOfFreedom, StatsError, TestResult};

/// Samples up to this size get an exact permutation p-value.
pub const EXACT_SPEARMAN_MAX_N: usize = 10;

/// Ranks starting at 1, with tied values sharing the average of their ranks.
pub fn rank_with_ties(x: &[f64]) -> Result<Vec<f64>, StatsError> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(StatsError::NaNInput);
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let mut ranks = alloc::vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share the mean of ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    Ok(ranks)
}

/// Pearson correlation; `DegenerateInput` if either sequence is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateInput);
    }
    Ok((sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with a two-sided p-value.
///
/// The coefficient is the Pearson correlation of tie-averaged ranks. For
/// `n <= 10` the p-value is exact, from all `n!` rearrangements of the second
/// ranking; above that it uses `t = rho * sqrt((n - 2) / (1 - rho^2))` on
/// `n - 2` degrees of freedom.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    check_finite(x)?;
    check_finite(y)?;
    let n = x.len();
    if n < 3 {
        return Err(StatsError::SampleTooSmall { n, min: 3 });
    }
    let rx = rank_with_ties(x)?;
    let ry = rank_with_ties(y)?;
    let rho = pearson(&rx, &ry)?;

    let (p_value, df, method) = if n <= EXACT_SPEARMAN_MAX_N {
        (exact_p_value(&rx, &ry), None, "spearman (exact permutation)")
    } else {
        let dof = (n - 2) as f64;
        let p = if rho.abs() >= 1.0 {
            0.0
        } else {
            let t = rho * math::sqrt(dof / ((1.0 - rho) * (1.0 + rho)));
            student_t_two_sided(t, dof)?
        };
        (p, Some(DegreesOfFreedom::One((n - 2) as u64)), "spearman (t approximation)")
    };

    Ok(TestResult {
        method: String::from(method),
        statistic: rho,
        p_value: p_value.clamp(0.0, 1.0),
        df,
        n,
    })
}

/// Share of permutations of `ry` whose rank correlation with `rx` is at
/// least as large in magnitude as the observed one.
///
/// Ranks are multiples of 1/2, so doubled and centred they are integers and
/// the cross-product sum is tracked exactly while Heap's algorithm swaps one
/// pair at a time.
fn exact_p_value(rx: &[f64], ry: &[f64]) -> f64 {
    let n = rx.len();
    let centre = |r: &f64| (2.0 * r) as i64 - (n as i64 + 1);
    let cx: Vec<i64> = rx.iter().map(centre).collect();
    let mut cy: Vec<i64> = ry.iter().map(centre).collect();

    let mut s: i64 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum();
    let observed = s.abs();
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    let mut count = |s: i64| {
        total += 1;
        if s.abs() >= observed {
            hits += 1;
        }
    };
    count(s);

    let mut c = alloc::vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            s += (cx[j] - cx[i]) * (cy[i] - cy[j]);
            cy.swap(i, j);
            count(s);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ranks_with_and_without_ties() {
        assert_eq!(rank_with_ties(&[10.0, 20.0, 30.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_with_ties(&[5.0, 5.0]).unwrap(), vec![1.5, 1.5]);
        assert_eq!(
            rank_with_ties(&[3.0, 1.0, 3.0, 2.0]).unwrap(),
            vec![3.5, 1.0, 3.5, 2.0]
        );
        assert_eq!(rank_with_ties(&[1.0, f64::NAN]), Err(StatsError::NaNInput));
    }

    #[test]
    fn perfect_monotone_relations() {
        let x: Vec<f64> = (0..15).map(f64::from).collect();
        let up: Vec<f64> = x.iter().map(|v| v * v + 1.0).collect();
        let down: Vec<f64> = x.iter().map(|v| -v * 3.0).collect();
        let r = spearman(&x, &up).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(spearman(&x, &down).unwrap().statistic, -1.0);

        let small = [1.0, 2.0, 3.0, 4.0, 5.0];
        let r = spearman(&small, &small).unwrap();
        assert_eq!(r.statistic, 1.0);
        // only the identity and the full reversal reach |rho| = 1
        assert!((r.p_value - 2.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn constant_input_is_degenerate() {
        assert_eq!(
            spearman(&[1.0, 1.0, 1.0, 1.0], &[1.0, 2.0, 3.0, 4.0]),
            Err(StatsError::DegenerateInput)
        );
        assert!(matches!(
            spearman(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::SampleTooSmall { .. })
        ));
        assert!(matches!(
            spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(StatsError::LengthMismatch(3, 2))
        ));
    }
}
