//! Nadaraya-Watson regression with a product Gaussian kernel, bandwidths
//! chosen by leave-one-out least-squares cross-validation.

pub mod optim;

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::math;
use optim::NelderMead;

pub const DEFAULT_SEED: u64 = 20_151_025;
pub const DEFAULT_N_STARTS: usize = 8;
pub const MIN_PERMUTATIONS: usize = 99;

/// Multi-start range, as multiples of each predictor's standard deviation.
const START_LOW: f64 = 0.1;
const START_HIGH: f64 = 100.0;
/// Log-bandwidths are kept within this distance of `ln(sd)`.
const LOG_SPAN: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("bandwidth {index} is {value}; bandwidths must be positive and finite")]
    NonPositiveBandwidth { index: usize, value: f64 },
    #[error("invalid regression design: {0}")]
    InvalidDesign(String),
    #[error("no optimizer start converged ({} starts tried)", diagnostics.len())]
    OptimizationFailed { diagnostics: Vec<StartDiagnostics> },
}

/// Response vector plus predictor columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionDesign {
    y: Vec<f64>,
    columns: Vec<Vec<f64>>,
    predictor_names: Vec<String>,
}

impl RegressionDesign {
    pub fn new(
        y: Vec<f64>,
        columns: Vec<Vec<f64>>,
        predictor_names: Vec<String>,
    ) -> Result<Self, KernelError> {
        let n = y.len();
        let p = columns.len();
        if p == 0 {
            return Err(KernelError::InvalidDesign("no predictors".into()));
        }
        if predictor_names.len() != p {
            return Err(KernelError::InvalidDesign(alloc::format!(
                "{} predictor names for {} columns",
                predictor_names.len(),
                p
            )));
        }
        if n < p + 2 {
            return Err(KernelError::InvalidDesign(alloc::format!(
                "{n} observations for {p} predictors (need at least {})",
                p + 2
            )));
        }
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != n) {
            return Err(KernelError::InvalidDesign(alloc::format!(
                "column {j} has {} values, expected {n}",
                c.len()
            )));
        }
        if y.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(KernelError::InvalidDesign("non-finite value".into()));
        }
        Ok(RegressionDesign {
            y,
            columns,
            predictor_names,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn predictor_names(&self) -> &[String] {
        &self.predictor_names
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    fn mean_y(&self) -> f64 {
        self.y.iter().sum::<f64>() / self.n() as f64
    }

    /// Sample standard deviation of column `j`, or 1 for a constant column.
    fn scale(&self, j: usize) -> f64 {
        let sd = sample_sd(&self.columns[j]);
        if sd > 0.0 && sd.is_finite() {
            sd
        } else {
            1.0
        }
    }
}

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    math::sqrt(x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0))
}

fn check_bandwidths(bandwidths: &[f64], p: usize) -> Result<(), KernelError> {
    if bandwidths.len() != p {
        return Err(KernelError::InvalidDesign(alloc::format!(
            "{} bandwidths for {p} predictors",
            bandwidths.len()
        )));
    }
    for (index, &value) in bandwidths.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(KernelError::NonPositiveBandwidth { index, value });
        }
    }
    Ok(())
}

/// Kernel-weighted average of `y` at `x0`. Falls back to the mean of `y` when
/// every weight underflows to zero.
pub fn nw_estimate(
    design: &RegressionDesign,
    bandwidths: &[f64],
    x0: &[f64],
) -> Result<f64, KernelError> {
    check_bandwidths(bandwidths, design.p())?;
    if x0.len() != design.p() {
        return Err(KernelError::InvalidDesign(alloc::format!(
            "query point has {} coordinates, expected {}",
            x0.len(),
            design.p()
        )));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..design.n() {
        let mut s = 0.0;
        for (j, h) in bandwidths.iter().enumerate() {
            let u = (design.columns[j][i] - x0[j]) / h;
            s += u * u;
        }
        let w = math::exp(-0.5 * s);
        num += w * design.y[i];
        den += w;
    }
    Ok(if den > 0.0 { num / den } else { design.mean_y() })
}

/// Squared coordinate differences for every unordered pair of observations,
/// laid out pair-major so one pass over a pair touches contiguous memory.
struct PairTable {
    p: usize,
    sq: Vec<f64>,
}

impl PairTable {
    fn new(design: &RegressionDesign) -> Self {
        let (n, p) = (design.n(), design.p());
        let mut sq = Vec::with_capacity(n * (n - 1) / 2 * p);
        for i in 0..n {
            for k in i + 1..n {
                for c in &design.columns {
                    let d = c[i] - c[k];
                    sq.push(d * d);
                }
            }
        }
        PairTable { p, sq }
    }

    /// Per-pair exponent `sum_j d_j^2 / (2 h_j^2)` over the predictors whose
    /// `inv` entry is non-zero.
    fn exponents(&self, inv: &[f64]) -> Vec<f64> {
        self.sq
            .chunks_exact(self.p)
            .map(|d| d.iter().zip(inv).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn inverse_factors(bandwidths: &[f64]) -> Vec<f64> {
    bandwidths.iter().map(|h| 0.5 / (h * h)).collect()
}

/// Kernel-weighted sums `(sum_k w_ik y_k, sum_k w_ik)` over `k != i`.
fn neighbour_sums(n: usize, y: &[f64], exponents: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut num = alloc::vec![0.0; n];
    let mut den = alloc::vec![0.0; n];
    let mut e = exponents.iter();
    for i in 0..n {
        for k in i + 1..n {
            let w = math::exp(-e.next().copied().unwrap_or(f64::INFINITY));
            num[i] += w * y[k];
            den[i] += w;
            num[k] += w * y[i];
            den[k] += w;
        }
    }
    (num, den)
}

/// In-sample predictions; each point carries weight 1 on itself.
fn in_sample(n: usize, y: &[f64], exponents: &[f64]) -> Vec<f64> {
    let (num, den) = neighbour_sums(n, y, exponents);
    (0..n).map(|i| (num[i] + y[i]) / (den[i] + 1.0)).collect()
}

fn mean_squared_error(y: &[f64], yhat: &[f64]) -> f64 {
    y.iter().zip(yhat).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / y.len() as f64
}

/// Leave-one-out cross-validation score `(1/n) sum_i (y_i - yhat_{-i}(x_i))^2`.
///
/// When every weight on some observation underflows its leave-one-out
/// estimate is undefined, and so is the score: the result is `+inf`.
/// (Substituting a mean there would tie the tiny-bandwidth region with the
/// infinite-bandwidth limit, where the in-sample fit interpolates.)
pub fn cv_score(design: &RegressionDesign, bandwidths: &[f64]) -> Result<f64, KernelError> {
    check_bandwidths(bandwidths, design.p())?;
    let table = PairTable::new(design);
    Ok(cv_from_exponents(design, &table.exponents(&inverse_factors(bandwidths))))
}

fn cv_from_exponents(design: &RegressionDesign, exponents: &[f64]) -> f64 {
    let (num, den) = neighbour_sums(design.n(), &design.y, exponents);
    if den.iter().any(|d| *d <= 0.0) {
        return f64::INFINITY;
    }
    let loo: Vec<f64> = num.iter().zip(&den).map(|(a, d)| a / d).collect();
    mean_squared_error(&design.y, &loo)
}

/// In-sample fitted values at the design points.
pub fn fitted_values(design: &RegressionDesign, bandwidths: &[f64]) -> Result<Vec<f64>, KernelError> {
    check_bandwidths(bandwidths, design.p())?;
    let table = PairTable::new(design);
    let e = table.exponents(&inverse_factors(bandwidths));
    Ok(in_sample(design.n(), &design.y, &e))
}

/// Squared Pearson correlation of `y` and `yhat`; 0 when either is constant.
pub fn r_squared(y: &[f64], yhat: &[f64]) -> f64 {
    match crate::stats::pearson(y, yhat) {
        Ok(r) => (r * r).clamp(0.0, 1.0),
        Err(_) => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartDiagnostics {
    pub start: Vec<f64>,
    pub bandwidths: Vec<f64>,
    pub cv_score: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LscvResult {
    pub bandwidths: Vec<f64>,
    pub cv_score: f64,
    pub starts: Vec<StartDiagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LscvOptions {
    pub seed: u64,
    pub n_starts: usize,
    pub optimizer: NelderMead,
}

impl Default for LscvOptions {
    fn default() -> Self {
        LscvOptions {
            seed: DEFAULT_SEED,
            n_starts: DEFAULT_N_STARTS,
            optimizer: NelderMead {
                max_evals: 4000,
                xatol: 1e-6,
                fatol: 1e-300,
                frtol: 1e-10,
                initial_step: 1.0,
                lower: -LOG_SPAN,
                upper: LOG_SPAN,
                target: f64::NEG_INFINITY,
            },
        }
    }
}

/// Starting points in `ln(h_j / sd_j)`, spread geometrically from `0.1 sd` to
/// `100 sd`. The end points are exact; interior starts get a small seeded
/// jitter per predictor.
fn start_points(p: usize, options: &LscvOptions) -> Vec<Vec<f64>> {
    let k = options.n_starts.max(1);
    let lo = math::ln(START_LOW);
    let hi = math::ln(START_HIGH);
    let step = if k > 1 { (hi - lo) / (k - 1) as f64 } else { 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    (0..k)
        .map(|s| {
            let base = if k > 1 { lo + step * s as f64 } else { hi };
            (0..p)
                .map(|_| {
                    if s == 0 || s + 1 == k {
                        base
                    } else {
                        base + rng.gen_range(-0.25..0.25) * step
                    }
                })
                .collect()
        })
        .collect()
}

fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Bandwidths minimizing the leave-one-out CV score, by multi-start
/// Nelder-Mead in log-bandwidth space.
///
/// Among converged starts the lowest score wins; on ties the later (larger)
/// start wins. A constant response scores 0 everywhere and returns the largest
/// start.
pub fn lscv_bandwidths(
    design: &RegressionDesign,
    options: &LscvOptions,
) -> Result<LscvResult, KernelError> {
    let p = design.p();
    let scales: Vec<f64> = (0..p).map(|j| design.scale(j)).collect();
    let to_h = |z: &[f64]| -> Vec<f64> {
        z.iter().zip(&scales).map(|(z, s)| s * math::exp(*z)).collect()
    };
    let starts = start_points(p, options);

    if design.y.iter().all(|v| *v == design.y[0]) {
        let diagnostics: Vec<StartDiagnostics> = starts
            .iter()
            .map(|z| StartDiagnostics {
                start: to_h(z),
                bandwidths: to_h(z),
                cv_score: 0.0,
                evaluations: 0,
                converged: true,
            })
            .collect();
        let last = diagnostics[diagnostics.len() - 1].clone();
        return Ok(LscvResult {
            bandwidths: last.bandwidths,
            cv_score: 0.0,
            starts: diagnostics,
        });
    }

    let table = PairTable::new(design);
    let objective = |z: &[f64]| -> f64 {
        let inv: Vec<f64> = z
            .iter()
            .zip(&scales)
            .map(|(z, s)| 0.5 / (s * s) * math::exp(-2.0 * z))
            .collect();
        cv_from_exponents(design, &table.exponents(&inv))
    };

    let diagnostics: Vec<StartDiagnostics> = map_indexed(starts.len(), |s| {
        let m = options.optimizer.minimize(&objective, &starts[s]);
        StartDiagnostics {
            start: to_h(&starts[s]),
            bandwidths: to_h(&m.x),
            cv_score: m.f,
            evaluations: m.evals,
            converged: m.converged,
        }
    });

    let best = diagnostics
        .iter()
        .filter(|d| d.converged && d.cv_score.is_finite())
        .fold(None::<&StartDiagnostics>, |acc, d| match acc {
            Some(b) if b.cv_score < d.cv_score => Some(b),
            _ => Some(d),
        });
    match best {
        Some(b) => Ok(LscvResult {
            bandwidths: b.bandwidths.clone(),
            cv_score: b.cv_score,
            starts: diagnostics.clone(),
        }),
        None => Err(KernelError::OptimizationFailed { diagnostics }),
    }
}

/// Options for [`fit`]. `relevance: None` skips the permutation tests.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub lscv: LscvOptions,
    pub relevance: Option<RelevanceOptions>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            lscv: LscvOptions::default(),
            relevance: Some(RelevanceOptions::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelevanceOptions {
    pub n_perm: usize,
    pub seed: u64,
}

impl Default for RelevanceOptions {
    fn default() -> Self {
        RelevanceOptions {
            n_perm: 999,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelFit {
    pub predictor_names: Vec<String>,
    pub bandwidths: Vec<f64>,
    pub fitted: Vec<f64>,
    pub r_squared: f64,
    pub cv_score: f64,
    pub relevance_p: Vec<Option<f64>>,
}

pub fn fit(design: &RegressionDesign, options: &FitOptions) -> Result<KernelFit, KernelError> {
    let lscv = lscv_bandwidths(design, &options.lscv)?;
    let fitted = fitted_values(design, &lscv.bandwidths)?;
    let mut out = KernelFit {
        predictor_names: design.predictor_names.clone(),
        r_squared: r_squared(&design.y, &fitted),
        bandwidths: lscv.bandwidths,
        fitted,
        cv_score: lscv.cv_score,
        relevance_p: alloc::vec![None; design.p()],
    };
    if let Some(rel) = options.relevance {
        for j in 0..design.p() {
            out.relevance_p[j] = Some(predictor_relevance(design, j, rel.n_perm, rel.seed)?);
        }
    }
    Ok(out)
}

/// Start points for the one-dimensional bandwidth search in the relevance
/// test, as multiples of the predictor's standard deviation.
const RELEVANCE_STARTS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];

/// Permutation p-value for predictor `j`.
///
/// The other bandwidths are selected by cross-validation on the design without
/// column `j` and then held fixed. The statistic is the lowest leave-one-out
/// CV score reachable by tuning `h_j` alone, computed the same way for the
/// observed column and for each shuffled copy of it. Because the fixed
/// bandwidths never see column `j`, observed and shuffled statistics are
/// exchangeable when the predictor carries no information, and
/// `p = (1 + #{CV_perm <= CV_obs}) / (n_perm + 1)` is a valid p-value.
///
/// The score is an out-of-sample fit measure (`1 - CV / var(y)` is a
/// predictive R²); in-sample R² would be useless here since it reaches 1 at
/// any bandwidth small enough to interpolate.
pub fn predictor_relevance(
    design: &RegressionDesign,
    j: usize,
    n_perm: usize,
    seed: u64,
) -> Result<f64, KernelError> {
    let p = design.p();
    if j >= p {
        return Err(KernelError::InvalidDesign(alloc::format!(
            "predictor index {j} out of range for {p} predictors"
        )));
    }
    if n_perm < MIN_PERMUTATIONS {
        return Err(KernelError::InvalidDesign(alloc::format!(
            "{n_perm} permutations requested, need at least {MIN_PERMUTATIONS}"
        )));
    }
    let n = design.n();
    let pairs = n * (n - 1) / 2;

    // pair exponents of the reduced model
    let base = if p == 1 {
        alloc::vec![0.0; pairs]
    } else {
        let mut columns = design.columns.clone();
        columns.remove(j);
        let mut names = design.predictor_names.clone();
        names.remove(j);
        let reduced = RegressionDesign::new(design.y.clone(), columns, names)?;
        let options = LscvOptions {
            seed,
            ..LscvOptions::default()
        };
        let h = lscv_bandwidths(&reduced, &options)?.bandwidths;
        PairTable::new(&reduced).exponents(&inverse_factors(&h))
    };

    let scale = design.scale(j);
    // Lowest CV reachable by tuning h_j, or stop early once it reaches `target`.
    let best_cv = |col: &[f64], target: f64| -> f64 {
        let mut sq = Vec::with_capacity(pairs);
        for i in 0..n {
            for k in i + 1..n {
                let d = col[i] - col[k];
                sq.push(d * d);
            }
        }
        let objective = |z: &[f64]| -> f64 {
            let c = 0.5 / (scale * scale) * math::exp(-2.0 * z[0]);
            let e: Vec<f64> = base.iter().zip(&sq).map(|(b, d)| b + c * d).collect();
            cv_from_exponents(design, &e)
        };
        let optimizer = NelderMead {
            target,
            ..LscvOptions::default().optimizer
        };
        let mut best = f64::INFINITY;
        for m in RELEVANCE_STARTS {
            best = best.min(optimizer.minimize(&objective, &[math::ln(m)]).f);
            if best <= target {
                break;
            }
        }
        best
    };

    let observed = best_cv(&design.columns[j], f64::NEG_INFINITY);
    let exceed = map_indexed(n_perm, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((j as u64 + 1) << 32) | b as u64);
        let mut col = design.columns[j].clone();
        col.shuffle(&mut rng);
        best_cv(&col, observed) <= observed
    });

    let hits = exceed.iter().filter(|e| **e).count();
    Ok((1 + hits) as f64 / (n_perm + 1) as f64)
}
