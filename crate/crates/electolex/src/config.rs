use std::path::{Path, PathBuf};

use chrono::{FixedOffset, NaiveDate};
use electolex_core::kernelreg::{DEFAULT_SEED, MIN_PERMUTATIONS};
use electolex_core::LogBase;
use serde::Serialize;

/// Everything a pipeline run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub candidates: PathBuf,
    pub tweets: PathBuf,
    /// Stop-word list, one word per line; the bundled Spanish list if `None`.
    pub stopwords: Option<PathBuf>,
    pub window_start: NaiveDate,
    pub window_end: NaiveDate,
    /// Offset in which tweet timestamps are turned into calendar dates.
    pub utc_offset: FixedOffset,
    pub top_n: usize,
    pub l2_normalize: bool,
    pub log_base: LogBase,
    pub kernel_seed: u64,
    pub n_perm: usize,
    /// Run the permutation relevance test for each kernel predictor.
    pub relevance: bool,
    pub strict: bool,
    /// Worker threads; `None` lets rayon decide. Never changes results.
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// A configuration with default settings for the given inputs.
    pub fn new(
        candidates: impl Into<PathBuf>,
        tweets: impl Into<PathBuf>,
        window_start: NaiveDate,
        window_end: NaiveDate,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        RunConfig {
            candidates: candidates.into(),
            tweets: tweets.into(),
            stopwords: None,
            window_start,
            window_end,
            utc_offset: FixedOffset::east_opt(0).expect("zero offset"),
            top_n: 30,
            l2_normalize: false,
            log_base: LogBase::Natural,
            kernel_seed: DEFAULT_SEED,
            n_perm: 999,
            relevance: true,
            strict: false,
            threads: None,
            out_dir: out_dir.into(),
        }
    }

    /// The settings that can affect results: no thread count, no output
    /// directory.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            candidates: self.candidates.display().to_string(),
            tweets: self.tweets.display().to_string(),
            stopwords: self.stopwords.as_ref().map(|p| p.display().to_string()),
            window_start: self.window_start.to_string(),
            window_end: self.window_end.to_string(),
            utc_offset: self.utc_offset.to_string(),
            top_n: self.top_n,
            l2_normalize: self.l2_normalize,
            log_base: self.log_base,
            kernel_seed: self.kernel_seed,
            n_perm: self.n_perm,
            relevance: self.relevance,
            strict: self.strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub candidates: String,
    pub tweets: String,
    pub stopwords: Option<String>,
    pub window_start: String,
    pub window_end: String,
    pub utc_offset: String,
    pub top_n: usize,
    pub l2_normalize: bool,
    pub log_base: LogBase,
    pub kernel_seed: u64,
    pub n_perm: usize,
    pub relevance: bool,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{role} file {path} does not exist or is not a file")]
    MissingInput { role: &'static str, path: PathBuf },
    #[error("window end {end} is before window start {start}")]
    WindowInverted { start: NaiveDate, end: NaiveDate },
    #[error("top-n must be at least 1")]
    ZeroTopN,
    #[error("{n_perm} permutations requested; the relevance test needs at least {min}")]
    TooFewPermutations { n_perm: usize, min: usize },
    #[error("thread count must be at least 1")]
    ZeroThreads,
    #[error("output path {0} exists and is not a directory")]
    OutputNotDirectory(PathBuf),
}

fn check_input(role: &'static str, path: &Path, errors: &mut Vec<ConfigError>) {
    if !path.is_file() {
        errors.push(ConfigError::MissingInput {
            role,
            path: path.to_path_buf(),
        });
    }
}

/// Every problem with `config`; empty when it is usable.
pub fn validate_config(config: &RunConfig) -> Vec<ConfigError> {
    let mut errors = Vec::new();
    check_input("candidates", &config.candidates, &mut errors);
    check_input("tweets", &config.tweets, &mut errors);
    if let Some(s) = &config.stopwords {
        check_input("stopwords", s, &mut errors);
    }
    if config.window_end < config.window_start {
        errors.push(ConfigError::WindowInverted {
            start: config.window_start,
            end: config.window_end,
        });
    }
    if config.top_n == 0 {
        errors.push(ConfigError::ZeroTopN);
    }
    if config.relevance && config.n_perm < MIN_PERMUTATIONS {
        errors.push(ConfigError::TooFewPermutations {
            n_perm: config.n_perm,
            min: MIN_PERMUTATIONS,
        });
    }
    if config.threads == Some(0) {
        errors.push(ConfigError::ZeroThreads);
    }
    if config.out_dir.exists() && !config.out_dir.is_dir() {
        errors.push(ConfigError::OutputNotDirectory(config.out_dir.clone()));
    }
    errors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn valid(dir: &Path) -> RunConfig {
        let c = dir.join("c.csv");
        let t = dir.join("t.jsonl");
        std::fs::write(&c, "").unwrap();
        std::fs::write(&t, "").unwrap();
        RunConfig::new(c, t, date("2015-10-01"), date("2015-10-24"), dir.join("out"))
    }

    #[test]
    fn valid_config_has_no_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(validate_config(&valid(dir.path())), []);
    }

    #[test]
    fn missing_tweets_file_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = valid(dir.path());
        c.tweets = dir.path().join("nope.jsonl");
        let errors = validate_config(&c);
        assert_eq!(errors.len(), 1);
        assert!(errors[0].to_string().contains("nope.jsonl"));
    }

    #[test]
    fn reports_every_violation() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = valid(dir.path());
        c.window_end = date("2015-09-01");
        c.top_n = 0;
        c.n_perm = 10;
        c.threads = Some(0);
        c.stopwords = Some(dir.path().join("missing.txt"));
        c.out_dir = c.candidates.clone();
        let errors = validate_config(&c);
        assert_eq!(errors.len(), 6, "{errors:?}");
        assert!(errors.contains(&ConfigError::WindowInverted {
            start: date("2015-10-01"),
            end: date("2015-09-01")
        }));
        c.relevance = false;
        assert_eq!(validate_config(&c).len(), 5);
    }

    #[test]
    fn echo_leaves_out_threads_and_output() {
        let dir = tempfile::tempdir().unwrap();
        let a = valid(dir.path());
        let mut b = a.clone();
        b.threads = Some(8);
        b.out_dir = PathBuf::from("/elsewhere");
        assert_eq!(a.echo(), b.echo());
        assert_eq!(a.echo().utc_offset, "+00:00");
    }
}
