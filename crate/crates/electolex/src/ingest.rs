//! Candidate tables (CSV), tweet archives (JSON lines) and per-candidate
//! corpus assembly.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use chrono::{DateTime, FixedOffset, NaiveDate};
use electolex_core::{CandidateProfile, IdeologyClass};
use log::{info, warn};
use serde::Deserialize;

/// Column names a candidates CSV must carry, in documented order.
pub const CANDIDATE_COLUMNS: [&str; 7] = [
    "candidate_id",
    "twitter_username",
    "party_name",
    "ideology_class",
    "department",
    "votes_received",
    "followers",
];

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("candidates file has no column {0:?}")]
    MissingColumn(String),
    #[error("candidate {candidate_id:?} appears twice (rows {first} and {second})")]
    DuplicateCandidate {
        candidate_id: String,
        first: usize,
        second: usize,
    },
    #[error("row {row}, column {column}: {reason}")]
    MalformedRow {
        row: usize,
        column: String,
        reason: String,
    },
    #[error("tweets line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("tweets line {line}: candidate {candidate_id:?} is not in the candidates table")]
    UnknownCandidate { line: usize, candidate_id: String },
    #[error("no tweet falls in the window {start} to {end}")]
    EmptyWindow { start: NaiveDate, end: NaiveDate },
    #[error("window start {start} is after window end {end}")]
    WindowInverted { start: NaiveDate, end: NaiveDate },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Candidate profiles keyed by `candidate_id`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CandidateTable {
    profiles: BTreeMap<String, CandidateProfile>,
}

impl CandidateTable {
    pub fn get(&self, candidate_id: &str) -> Option<&CandidateProfile> {
        self.profiles.get(candidate_id)
    }

    pub fn contains(&self, candidate_id: &str) -> bool {
        self.profiles.contains_key(candidate_id)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> &BTreeMap<String, CandidateProfile> {
        &self.profiles
    }

    pub fn iter(&self) -> impl Iterator<Item = &CandidateProfile> {
        self.profiles.values()
    }
}

pub fn load_candidates(path: &Path) -> Result<CandidateTable, IngestError> {
    let file = File::open(path).map_err(io_error(path))?;
    parse_candidates(file)
}

/// Parses a candidates CSV. Row numbers in errors count the header as row 1.
pub fn parse_candidates<R: Read>(reader: R) -> Result<CandidateTable, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::MalformedRow {
            row: 1,
            column: "header".into(),
            reason: e.to_string(),
        })?
        .clone();
    let mut index = [0usize; 7];
    for (slot, name) in index.iter_mut().zip(CANDIDATE_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.into()))?;
    }

    let mut profiles = BTreeMap::new();
    let mut seen_at: BTreeMap<String, usize> = BTreeMap::new();
    for (k, record) in rdr.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(|e| IngestError::MalformedRow {
            row,
            column: "*".into(),
            reason: e.to_string(),
        })?;
        let field = |c: usize| -> Result<&str, IngestError> {
            record.get(index[c]).ok_or_else(|| IngestError::MalformedRow {
                row,
                column: CANDIDATE_COLUMNS[c].into(),
                reason: "field missing".into(),
            })
        };
        let malformed = |c: usize, reason: String| IngestError::MalformedRow {
            row,
            column: CANDIDATE_COLUMNS[c].into(),
            reason,
        };
        let count = |c: usize| -> Result<u64, IngestError> {
            let s = field(c)?;
            s.parse::<u64>()
                .map_err(|_| malformed(c, format!("{s:?} is not a non-negative integer")))
        };

        let candidate_id = field(0)?.to_string();
        if candidate_id.is_empty() {
            return Err(malformed(0, "empty candidate id".into()));
        }
        let ideology_class = field(3)?
            .parse::<IdeologyClass>()
            .map_err(|e| malformed(3, e.to_string()))?;
        let profile = CandidateProfile {
            candidate_id: candidate_id.clone(),
            twitter_username: field(1)?.to_string(),
            party_name: field(2)?.to_string(),
            ideology_class,
            department: field(4)?.to_string(),
            votes_received: count(5)?,
            followers: count(6)?,
        };
        if let Some(&first) = seen_at.get(&candidate_id) {
            return Err(IngestError::DuplicateCandidate {
                candidate_id,
                first,
                second: row,
            });
        }
        seen_at.insert(candidate_id.clone(), row);
        profiles.insert(candidate_id, profile);
    }
    Ok(CandidateTable { profiles })
}

/// One tweet as stored in the archive.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct RawTweet {
    pub candidate_id: String,
    pub text: String,
    pub retweet_count: u64,
    pub timestamp: DateTime<FixedOffset>,
}

/// Reads a JSON-lines tweet archive. Blank lines are skipped; any other line
/// that does not parse stops the load with its 1-based line number.
///
/// With `strict`, a tweet whose candidate is missing from `candidates` is an
/// error; otherwise it is kept and later ignored by [`assemble_corpora`].
pub fn load_tweets(
    path: &Path,
    candidates: &CandidateTable,
    strict: bool,
) -> Result<Vec<RawTweet>, IngestError> {
    let file = File::open(path).map_err(io_error(path))?;
    let tweets = parse_tweets(BufReader::new(file), candidates, strict)?;
    if tweets.is_empty() {
        warn!("{} contains no tweets", path.display());
    }
    Ok(tweets)
}

pub fn parse_tweets<R: BufRead>(
    reader: R,
    candidates: &CandidateTable,
    strict: bool,
) -> Result<Vec<RawTweet>, IngestError> {
    let mut tweets = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| IngestError::MalformedLine {
            line: line_no,
            reason: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: RawTweet = serde_json::from_str(&line).map_err(|e| IngestError::MalformedLine {
            line: line_no,
            reason: e.to_string(),
        })?;
        if tweet.text.trim().is_empty() {
            return Err(IngestError::MalformedLine {
                line: line_no,
                reason: "text is empty".into(),
            });
        }
        if strict && !candidates.contains(&tweet.candidate_id) {
            return Err(IngestError::UnknownCandidate {
                line: line_no,
                candidate_id: tweet.candidate_id,
            });
        }
        tweets.push(tweet);
    }
    Ok(tweets)
}

/// Inclusive range of calendar dates, read in a fixed UTC offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub offset: FixedOffset,
}

impl Window {
    pub fn new(start: NaiveDate, end: NaiveDate, offset: FixedOffset) -> Result<Self, IngestError> {
        if start > end {
            return Err(IngestError::WindowInverted { start, end });
        }
        Ok(Window { start, end, offset })
    }

    pub fn contains(&self, t: &DateTime<FixedOffset>) -> bool {
        let day = t.with_timezone(&self.offset).date_naive();
        self.start <= day && day <= self.end
    }
}

/// Raw text per retained candidate plus the tweet and retweet tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusSet {
    pub corpora: BTreeMap<String, String>,
    pub tweet_counts: BTreeMap<String, u64>,
    pub retweet_totals: BTreeMap<String, u64>,
    /// Candidates in the table without any in-window tweet.
    pub dropped: Vec<String>,
    /// In-window tweets whose candidate is not in the table.
    pub orphan_tweets: usize,
}

impl CorpusSet {
    pub fn len(&self) -> usize {
        self.corpora.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corpora.is_empty()
    }

    pub fn total_tweets(&self) -> u64 {
        self.tweet_counts.values().sum()
    }
}

pub fn assemble_corpora(
    tweets: &[RawTweet],
    candidates: &CandidateTable,
    window: &Window,
) -> Result<CorpusSet, IngestError> {
    let mut set = CorpusSet::default();
    for t in tweets.iter().filter(|t| window.contains(&t.timestamp)) {
        if !candidates.contains(&t.candidate_id) {
            set.orphan_tweets += 1;
            continue;
        }
        let text = set.corpora.entry(t.candidate_id.clone()).or_default();
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&t.text);
        *set.tweet_counts.entry(t.candidate_id.clone()).or_default() += 1;
        *set.retweet_totals.entry(t.candidate_id.clone()).or_default() += t.retweet_count;
    }
    if set.orphan_tweets > 0 {
        warn!("ignored {} in-window tweets of unknown candidates", set.orphan_tweets);
    }
    if set.corpora.is_empty() {
        return Err(IngestError::EmptyWindow {
            start: window.start,
            end: window.end,
        });
    }
    for id in candidates.profiles().keys() {
        if !set.corpora.contains_key(id) {
            info!("dropping candidate {id}: no tweets in the window");
            set.dropped.push(id.clone());
        }
    }
    if !set.dropped.is_empty() {
        warn!("dropped {} candidates without in-window tweets: {}", set.dropped.len(), set.dropped.join(", "));
    }
    Ok(set)
}
