//! The analysis report and the CSV tables written next to it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use electolex_core::{FrequencyTable, IdeologyClass, PairClass, TestResult};
use serde::Serialize;

use crate::config::ConfigEcho;

/// Candidate-level quantities entering the normality and rank tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Votes,
    Followers,
    Tweets,
    Retweets,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Votes, Metric::Followers, Metric::Tweets, Metric::Retweets];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Votes => "votes",
            Metric::Followers => "followers",
            Metric::Tweets => "tweets",
            Metric::Retweets => "retweets",
        }
    }

    /// The six unordered pairs, row by row of the upper triangle.
    pub fn pairs() -> impl Iterator<Item = (Metric, Metric)> {
        (0..4).flat_map(|i| (i + 1..4).map(move |j| (Metric::ALL[i], Metric::ALL[j])))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub provenance: Provenance,
    pub corpus: CorpusSummary,
    pub frequency_table: FrequencyTable,
    /// Distance distribution of every pair class, empty ones included.
    pub pair_class_distances: BTreeMap<PairClass, DistanceSummary>,
    pub anova_over_pair_classes: TestResult,
    pub normality: BTreeMap<Metric, TestResult>,
    pub spearman_by_class: BTreeMap<IdeologyClass, SpearmanMatrix>,
    pub kernel_fit: KernelReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config: ConfigEcho,
    pub inputs: BTreeMap<String, InputDigest>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub candidates_loaded: usize,
    pub candidates_retained: usize,
    pub dropped_candidates: Vec<String>,
    pub tweets_loaded: usize,
    pub tweets_in_window: u64,
    pub tokens: usize,
    pub stems_kept: usize,
    pub vocabulary_size: usize,
    pub weighted_entries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSummary {
    pub n: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub min: Option<f64>,
    pub median: Option<f64>,
    pub max: Option<f64>,
}

impl DistanceSummary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return DistanceSummary {
                n,
                mean: None,
                sd: None,
                min: None,
                median: None,
                max: None,
            };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let sd = (n > 1).then(|| {
            (sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        });
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        DistanceSummary {
            n,
            mean: Some(mean),
            sd,
            min: Some(sorted[0]),
            median: Some(median),
            max: Some(sorted[n - 1]),
        }
    }
}

/// Rank correlations among the four metrics within one ideology class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpearmanMatrix {
    pub n: usize,
    pub cells: Vec<SpearmanCell>,
}

/// One pair of metrics. Exactly one of `result` and `unavailable` is set;
/// `unavailable` says why the coefficient is undefined (too few candidates,
/// a constant metric).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpearmanCell {
    pub x: Metric,
    pub y: Metric,
    pub result: Option<TestResult>,
    pub unavailable: Option<String>,
}

impl SpearmanMatrix {
    pub fn cell(&self, x: Metric, y: Metric) -> Option<&SpearmanCell> {
        self.cells
            .iter()
            .find(|c| (c.x, c.y) == (x, y) || (c.x, c.y) == (y, x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub response: String,
    pub predictors: Vec<String>,
    pub n: usize,
    pub seed: u64,
    pub bandwidths: BTreeMap<String, f64>,
    /// Bandwidth over the predictor's sample standard deviation. Values in
    /// the hundreds and beyond mean the predictor is smoothed away.
    pub bandwidth_over_sd: BTreeMap<String, f64>,
    pub r_squared: f64,
    pub cv_score: f64,
    pub relevance_method: Option<String>,
    pub n_perm: Option<usize>,
    pub relevance_p: BTreeMap<String, Option<f64>>,
    pub fitted: BTreeMap<String, f64>,
}

/// Per-candidate row of `candidate_metrics.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateRow {
    pub candidate_id: String,
    pub ideology_class: IdeologyClass,
    pub votes: u64,
    pub followers: u64,
    pub tweets: u64,
    pub retweets: u64,
    pub mean_distance: f64,
    pub fitted_votes: f64,
}

impl CandidateRow {
    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::Votes => self.votes as f64,
            Metric::Followers => self.followers as f64,
            Metric::Tweets => self.tweets as f64,
            Metric::Retweets => self.retweets as f64,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WriteError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("serializing the report: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn write_json(path: &Path, report: &AnalysisReport) -> Result<(), WriteError> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| WriteError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `rows` as CSV with a header taken from the row type.
pub fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), WriteError> {
    let err = |source| WriteError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for row in rows {
        w.serialize(row).map_err(err)?;
    }
    w.flush().map_err(|source| WriteError::Io {
        path: path.to_path_buf(),
        source,
    })
}
