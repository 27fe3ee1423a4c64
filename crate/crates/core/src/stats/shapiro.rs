//! Shapiro-Wilk W test, following Royston's AS R94 algorithm.
//!
//! The coefficients come from polynomial corrections to normal order
//! statistic approximations; the p-value comes from a normalizing transform
//! of `log(1 - W)` (separate fits for `n <= 11` and `n >= 12`, exact for
//! `n = 3`).

use alloc::string::String;
use alloc::vec::Vec;

use crate::math;

use super::special::{normal_quantile, normal_upper_tail};
use super::{check_finite, DegreesOfFreedom, StatsError, TestResult};

const MIN_N: usize = 3;
const MAX_N: usize = 5000;

const G: [f64; 2] = [-2.273, 0.459];
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

fn poly(cc: &[f64], x: f64) -> f64 {
    let mut ret = cc[0];
    if cc.len() > 1 {
        let mut p = x * cc[cc.len() - 1];
        for c in cc[1..cc.len() - 1].iter().rev() {
            p = (p + c) * x;
        }
        ret += p;
    }
    ret
}

/// Coefficients `a[1..=n/2]` (index 0 unused).
fn coefficients(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    let mut a = alloc::vec![0.0; nn2 + 1];
    if n == 3 {
        a[1] = core::f64::consts::FRAC_1_SQRT_2;
        return a;
    }
    let an = n as f64;
    let an25 = an + 0.25;
    let mut summ2 = 0.0;
    for (i, ai) in a.iter_mut().enumerate().skip(1) {
        *ai = normal_quantile((i as f64 - 0.375) / an25);
        summ2 += *ai * *ai;
    }
    summ2 *= 2.0;
    let ssumm2 = math::sqrt(summ2);
    let rsn = 1.0 / math::sqrt(an);
    let a1 = poly(&C1, rsn) - a[1] / ssumm2;

    let (i1, fac) = if n > 5 {
        let a2 = -a[2] / ssumm2 + poly(&C2, rsn);
        let fac = math::sqrt(
            (summ2 - 2.0 * (a[1] * a[1]) - 2.0 * (a[2] * a[2]))
                / (1.0 - 2.0 * (a1 * a1) - 2.0 * (a2 * a2)),
        );
        a[2] = a2;
        (3, fac)
    } else {
        let fac = math::sqrt((summ2 - 2.0 * (a[1] * a[1])) / (1.0 - 2.0 * (a1 * a1)));
        (2, fac)
    };
    a[1] = a1;
    for ai in a.iter_mut().skip(i1) {
        *ai /= -fac;
    }
    a
}

/// Shapiro-Wilk normality test for `3 <= n <= 5000`.
///
/// `df` mirrors `n`, as normality tables conventionally report it.
pub fn shapiro_wilk(x: &[f64]) -> Result<TestResult, StatsError> {
    check_finite(x)?;
    let n = x.len();
    if n < MIN_N {
        return Err(StatsError::SampleTooSmall { n, min: MIN_N });
    }
    if n > MAX_N {
        return Err(StatsError::SampleTooLarge { n, max: MAX_N });
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let range = sorted[n - 1] - sorted[0];
    if range <= 0.0 {
        return Err(StatsError::ConstantSample);
    }

    let a = coefficients(n);
    // Signed coefficient for sorted position i (0-based): antisymmetric about
    // the middle, zero at the centre of an odd sample.
    let coef = |i: usize| -> f64 {
        let j = n - 1 - i;
        match i.cmp(&j) {
            core::cmp::Ordering::Less => -a[i + 1],
            core::cmp::Ordering::Greater => a[j + 1],
            core::cmp::Ordering::Equal => 0.0,
        }
    };

    let scaled: Vec<f64> = sorted.iter().map(|v| v / range).collect();
    let sx = scaled.iter().sum::<f64>() / n as f64;
    let sa = (0..n).map(coef).sum::<f64>() / n as f64;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, xi) in scaled.iter().enumerate() {
        let asa = coef(i) - sa;
        let xsx = xi - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    // 1 - W, formed so that W close to 1 keeps its precision
    let ssassx = math::sqrt(ssa * ssx);
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = (1.0 - w1).min(1.0);

    let p_value = if n == 3 {
        const SIX_OVER_PI: f64 = 1.909_859_317_102_744;
        const ASIN_SQRT_THREE_QUARTERS: f64 = core::f64::consts::FRAC_PI_3;
        (SIX_OVER_PI * (libm::asin(math::sqrt(w)) - ASIN_SQRT_THREE_QUARTERS)).max(0.0)
    } else {
        let an = n as f64;
        let mut y = math::ln(w1);
        let (m, s) = if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                return Ok(result(w, 1e-99, n));
            }
            y = -math::ln(gamma - y);
            (poly(&C3, an), math::exp(poly(&C4, an)))
        } else {
            let ln_n = math::ln(an);
            (poly(&C5, ln_n), math::exp(poly(&C6, ln_n)))
        };
        normal_upper_tail((y - m) / s)
    };
    Ok(result(w, p_value.clamp(0.0, 1.0), n))
}

fn result(w: f64, p_value: f64, n: usize) -> TestResult {
    TestResult {
        method: String::from("shapiro-wilk (royston)"),
        statistic: w,
        p_value,
        df: Some(DegreesOfFreedom::One(n as u64)),
        n,
    }
}
