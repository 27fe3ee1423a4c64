//! ingest -> normalize -> vectorize -> similarity -> stats -> kernel regression.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use electolex_core::kernelreg::{
    self, FitOptions, KernelError, LscvOptions, RegressionDesign, RelevanceOptions,
};
use electolex_core::normalize::{normalize_corpus, NormalizeError, DEFAULT_MIN_TOKEN_LEN};
use electolex_core::similarity::{group_by_pair_class, mean_distances, pairwise_distances, SimilarityError};
use electolex_core::stats::{self, one_way_anova, shapiro_wilk, StatsError};
use electolex_core::vectorize::{
    build_vocabulary, document_frequency_table, term_document_matrix, tfidf_weight_with, VectorizeError,
};
use electolex_core::{DistanceRecord, IdeologyClass, Normalizer, PairClass, StopWordSet, WeightedMatrix};
use log::info;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{validate_config, ConfigError, RunConfig};
use crate::ingest::{assemble_corpora, load_candidates, load_tweets, IngestError, Window};
use crate::report::{
    write_csv, write_json, AnalysisReport, CandidateRow, CorpusSummary, DistanceSummary, InputDigest,
    KernelReport, Metric, Provenance, SpearmanCell, SpearmanMatrix, ToolInfo, WriteError,
};

/// Kernel regression predictors, in design order.
pub const PREDICTORS: [&str; 4] = ["retweets", "tweets", "followers", "mean_distance"];

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("[config] {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Config(Vec<ConfigError>),
    #[error("[config] cannot start the worker pool: {0}")]
    ThreadPool(String),
    #[error("[ingest] {0}")]
    Ingest(#[from] IngestError),
    #[error("[normalize] {0}")]
    Normalize(#[from] NormalizeError),
    #[error("[vectorize] {0}")]
    Vectorize(#[from] VectorizeError),
    #[error("[similarity] {0}")]
    Similarity(#[from] SimilarityError),
    #[error("[stats] {what}: {source}")]
    Stats { what: String, source: StatsError },
    #[error("[kernelreg] {0}")]
    Kernel(#[from] KernelError),
    #[error("[output] {0}")]
    Output(#[from] WriteError),
}

impl PipelineError {
    /// 2 for configuration problems, 3 for bad or unreadable data, 4 when a
    /// statistic or the regression cannot be computed.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::ThreadPool(_) => 2,
            PipelineError::Ingest(IngestError::WindowInverted { .. }) => 2,
            PipelineError::Ingest(_)
            | PipelineError::Normalize(_)
            | PipelineError::Vectorize(_)
            | PipelineError::Similarity(_)
            | PipelineError::Output(_) => 3,
            PipelineError::Stats { .. } | PipelineError::Kernel(_) => 4,
        }
    }
}

fn stats_error(what: impl Into<String>) -> impl FnOnce(StatsError) -> PipelineError {
    let what = what.into();
    move |source| PipelineError::Stats { what, source }
}

/// Everything computed by a run, before anything is written.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub candidates: Vec<CandidateRow>,
    pub distances: Vec<DistanceRecord>,
    pub weights: WeightedMatrix,
}

fn digest(role: &str, path: &Path) -> Result<(String, InputDigest), IngestError> {
    let bytes = fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let hash = Sha256::digest(&bytes);
    let d = InputDigest {
        path: path.display().to_string(),
        bytes: bytes.len() as u64,
        sha256: format!("{hash:x}"),
    };
    Ok((role.to_string(), d))
}

fn spearman_matrix(rows: &[&CandidateRow]) -> SpearmanMatrix {
    let cells = Metric::pairs()
        .map(|(x, y)| {
            let xs: Vec<f64> = rows.iter().map(|r| r.metric(x)).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.metric(y)).collect();
            match stats::spearman(&xs, &ys) {
                Ok(r) => SpearmanCell { x, y, result: Some(r), unavailable: None },
                Err(e) => SpearmanCell { x, y, result: None, unavailable: Some(e.to_string()) },
            }
        })
        .collect();
    SpearmanMatrix { n: rows.len(), cells }
}

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Runs every stage in memory. The configuration is assumed valid.
pub fn analyze(config: &RunConfig) -> Result<Analysis, PipelineError> {
    let window = Window::new(config.window_start, config.window_end, config.utc_offset)?;
    let table = load_candidates(&config.candidates)?;
    let tweets = load_tweets(&config.tweets, &table, config.strict)?;
    let corpus = assemble_corpora(&tweets, &table, &window)?;
    info!(
        "{} of {} candidates have tweets in the window ({} tweets)",
        corpus.len(),
        table.len(),
        corpus.total_tweets()
    );

    let stop = match &config.stopwords {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| IngestError::Io { path: p.clone(), source })?;
            StopWordSet::parse(&text)
        }
        None => StopWordSet::spanish(),
    };
    let normalizer = Normalizer::new(stop, DEFAULT_MIN_TOKEN_LEN);
    let docs = normalize_corpus(corpus.corpora.iter().map(|(k, v)| (k.as_str(), v.as_str())), &normalizer)?;

    let vocab = build_vocabulary(&docs)?;
    let tdm = term_document_matrix(&docs, &vocab)?;
    let mut weights = tfidf_weight_with(&tdm, config.log_base);
    if config.l2_normalize {
        weights = weights.l2_normalized();
    }
    let frequency_table = document_frequency_table(&tdm, config.top_n);

    let distances = pairwise_distances(&weights, table.profiles())?;
    let means = mean_distances(&distances);
    let groups = group_by_pair_class(&distances);
    let pair_class_distances = PairClass::ALL
        .iter()
        .map(|&c| (c, DistanceSummary::of(groups.get(&c).unwrap_or(&[]))))
        .collect();
    let anova = one_way_anova(&groups).map_err(stats_error("pair-class anova"))?;

    let mut candidates = Vec::with_capacity(corpus.len());
    for id in corpus.corpora.keys() {
        let p = table.get(id).expect("corpus keys come from the table");
        let mean_distance = *means
            .get(id)
            .ok_or_else(|| SimilarityError::UnknownCandidate(id.clone()))?;
        candidates.push(CandidateRow {
            candidate_id: id.clone(),
            ideology_class: p.ideology_class,
            votes: p.votes_received,
            followers: p.followers,
            tweets: corpus.tweet_counts[id],
            retweets: corpus.retweet_totals[id],
            mean_distance,
            fitted_votes: f64::NAN,
        });
    }

    let mut normality = BTreeMap::new();
    for m in Metric::ALL {
        let x: Vec<f64> = candidates.iter().map(|r| r.metric(m)).collect();
        let r = shapiro_wilk(&x).map_err(stats_error(format!("normality of {m}")))?;
        normality.insert(m, r);
    }

    let spearman_by_class = IdeologyClass::ALL
        .iter()
        .map(|&class| {
            let rows: Vec<&CandidateRow> = candidates.iter().filter(|r| r.ideology_class == class).collect();
            (class, spearman_matrix(&rows))
        })
        .collect();

    let y: Vec<f64> = candidates.iter().map(|r| r.votes as f64).collect();
    let columns: Vec<Vec<f64>> = vec![
        candidates.iter().map(|r| r.retweets as f64).collect(),
        candidates.iter().map(|r| r.tweets as f64).collect(),
        candidates.iter().map(|r| r.followers as f64).collect(),
        candidates.iter().map(|r| r.mean_distance).collect(),
    ];
    let names: Vec<String> = PREDICTORS.iter().map(|s| s.to_string()).collect();
    let design = RegressionDesign::new(y, columns, names.clone())?;
    let options = FitOptions {
        lscv: LscvOptions {
            seed: config.kernel_seed,
            ..LscvOptions::default()
        },
        relevance: config.relevance.then_some(RelevanceOptions {
            n_perm: config.n_perm,
            seed: config.kernel_seed,
        }),
    };
    let fit = kernelreg::fit(&design, &options)?;
    for (row, v) in candidates.iter_mut().zip(&fit.fitted) {
        row.fitted_votes = *v;
    }
    let kernel_fit = KernelReport {
        response: "votes".into(),
        predictors: names.clone(),
        n: design.n(),
        seed: config.kernel_seed,
        bandwidths: names.iter().cloned().zip(fit.bandwidths.iter().copied()).collect(),
        bandwidth_over_sd: names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let sd = sample_sd(design.column(j));
                let ratio = if sd > 0.0 { fit.bandwidths[j] / sd } else { f64::INFINITY };
                (name.clone(), ratio)
            })
            .collect(),
        r_squared: fit.r_squared,
        cv_score: fit.cv_score,
        relevance_method: config.relevance.then(|| {
            "permutation test standing in for a bootstrap significance test: the predictor is \
             shuffled, the other bandwidths stay at their cross-validated values without it, \
             and the statistic is the best leave-one-out CV score over its own bandwidth"
                .to_string()
        }),
        n_perm: config.relevance.then_some(config.n_perm),
        relevance_p: names.iter().cloned().zip(fit.relevance_p.iter().copied()).collect(),
        fitted: candidates.iter().map(|r| (r.candidate_id.clone(), r.fitted_votes)).collect(),
    };

    let mut inputs = vec![digest("candidates", &config.candidates)?, digest("tweets", &config.tweets)?];
    if let Some(p) = &config.stopwords {
        inputs.push(digest("stopwords", p)?);
    }

    let report = AnalysisReport {
        tool: ToolInfo::default(),
        provenance: Provenance {
            config: config.echo(),
            inputs: inputs.into_iter().collect(),
        },
        corpus: CorpusSummary {
            candidates_loaded: table.len(),
            candidates_retained: corpus.len(),
            dropped_candidates: corpus.dropped.clone(),
            tweets_loaded: tweets.len(),
            tweets_in_window: corpus.total_tweets(),
            tokens: docs.iter().map(|d| d.original_token_count).sum(),
            stems_kept: docs.iter().map(|d| d.stems.len()).sum(),
            vocabulary_size: vocab.len(),
            weighted_entries: weights.nnz(),
        },
        frequency_table,
        pair_class_distances,
        anova_over_pair_classes: anova,
        normality,
        spearman_by_class,
        kernel_fit,
    };
    Ok(Analysis {
        report,
        candidates,
        distances,
        weights,
    })
}

#[derive(Serialize)]
struct FrequencyCsvRow<'a> {
    rank: usize,
    stem: &'a str,
    document_frequency: usize,
}

#[derive(Serialize)]
struct DistanceCsvRow<'a> {
    pair_class: PairClass,
    candidate_a: &'a str,
    candidate_b: &'a str,
    distance: f64,
}

fn dist_row(r: &DistanceRecord) -> DistanceCsvRow<'_> {
    DistanceCsvRow {
        pair_class: r.pair_class,
        candidate_a: &r.candidate_a,
        candidate_b: &r.candidate_b,
        distance: r.distance,
    }
}

#[derive(Serialize)]
struct ScatterCsvRow<'a> {
    ideology_class: IdeologyClass,
    candidate_id: &'a str,
    metric: Metric,
    value: u64,
    votes: u64,
}

#[derive(Serialize)]
struct WeightCsvRow<'a> {
    stem: &'a str,
    candidate_id: &'a str,
    weight: f64,
}

/// File names written by [`write_outputs`].
pub const OUTPUT_FILES: [&str; 7] = [
    "report.json",
    "distances.csv",
    "boxplot_data.csv",
    "freq_table.csv",
    "scatter_data.csv",
    "candidate_metrics.csv",
    "weights.csv",
];

/// Writes the report and the CSV tables into `out_dir`, creating it if needed.
pub fn write_outputs(analysis: &Analysis, out_dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(out_dir).map_err(|source| WriteError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let path = |name: &str| out_dir.join(name);

    write_json(&path("report.json"), &analysis.report)?;
    write_csv(&path("distances.csv"), analysis.distances.iter().map(dist_row))?;

    let mut by_class: Vec<&DistanceRecord> = analysis.distances.iter().collect();
    by_class.sort_by_key(|r| r.pair_class);
    write_csv(&path("boxplot_data.csv"), by_class.into_iter().map(dist_row))?;

    write_csv(
        &path("freq_table.csv"),
        analysis.report.frequency_table.rows.iter().enumerate().map(|(i, r)| FrequencyCsvRow {
            rank: i + 1,
            stem: &r.stem,
            document_frequency: r.document_frequency,
        }),
    )?;

    let mut scatter = Vec::new();
    for class in IdeologyClass::ALL {
        for m in [Metric::Followers, Metric::Tweets, Metric::Retweets] {
            for r in analysis.candidates.iter().filter(|r| r.ideology_class == class) {
                scatter.push(ScatterCsvRow {
                    ideology_class: class,
                    candidate_id: &r.candidate_id,
                    metric: m,
                    value: r.metric(m) as u64,
                    votes: r.votes,
                });
            }
        }
    }
    write_csv(&path("scatter_data.csv"), scatter)?;
    write_csv(&path("candidate_metrics.csv"), &analysis.candidates)?;
    write_csv(
        &path("weights.csv"),
        analysis.weights.triplets().map(|(stem, candidate_id, weight)| WeightCsvRow {
            stem,
            candidate_id,
            weight,
        }),
    )?;
    Ok(OUTPUT_FILES.iter().map(|f| path(f)).collect())
}

/// Validates `config`, runs the analysis on `config.threads` workers and
/// writes all outputs.
pub fn run_pipeline(config: &RunConfig) -> Result<AnalysisReport, PipelineError> {
    let errors = validate_config(config);
    if !errors.is_empty() {
        return Err(PipelineError::Config(errors));
    }
    let analysis = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| PipelineError::ThreadPool(e.to_string()))?
            .install(|| analyze(config))?,
        None => analyze(config)?,
    };
    write_outputs(&analysis, &config.out_dir)?;
    Ok(analysis.report)
}
