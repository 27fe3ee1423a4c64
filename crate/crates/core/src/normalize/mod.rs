//! Raw text to stem sequences: cleaning, tokenization, Snowball Spanish
//! stemming and stop-word removal.

mod clean;
mod stemmer;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use clean::{clean_text, is_spanish_letter, tokenize};
pub use stemmer::stem;

/// The Snowball Spanish stop-word list in the on-disk stop-word file format.
pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords_es.txt");

/// Tokens shorter than this are dropped unless configured otherwise.
pub const DEFAULT_MIN_TOKEN_LEN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("document for candidate {candidate_id} is empty after stop-word removal")]
    EmptyDocument { candidate_id: String },
    #[error("no documents to normalize")]
    EmptyCorpus,
}

/// A candidate's cleaned, stemmed and stop-word-filtered token stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDocument {
    pub candidate_id: String,
    pub stems: Vec<String>,
    /// Tokens produced by the tokenizer, before stemming and filtering.
    pub original_token_count: usize,
}

/// Stop words together with their stemmed forms.
///
/// Filtering happens after stemming, so membership is tested against
/// `stemmed_forms`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWordSet {
    raw_words: BTreeSet<String>,
    stemmed_forms: BTreeSet<String>,
}

impl StopWordSet {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut raw_words = BTreeSet::new();
        let mut stemmed_forms = BTreeSet::new();
        for word in words {
            // Stop words go through the same cleaning as tweet text.
            for token in clean_text(word.as_ref()).split_whitespace() {
                stemmed_forms.insert(stem(token));
                raw_words.insert(String::from(token));
            }
        }
        StopWordSet { raw_words, stemmed_forms }
    }

    /// Parses the stop-word file format: one word per line, blank lines and
    /// lines starting with `#` ignored.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    /// The bundled Snowball Spanish list.
    pub fn spanish() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    pub fn raw_words(&self) -> &BTreeSet<String> {
        &self.raw_words
    }

    pub fn stemmed_forms(&self) -> &BTreeSet<String> {
        &self.stemmed_forms
    }

    pub fn contains_stem(&self, stem: &str) -> bool {
        self.stemmed_forms.contains(stem)
    }

    pub fn len(&self) -> usize {
        self.raw_words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw_words.is_empty()
    }
}

/// Keeps the stems that are not stop words, in their original order.
pub fn remove_stopwords(stems: Vec<String>, stop: &StopWordSet) -> Vec<String> {
    let had_any = !stems.is_empty();
    let kept: Vec<String> = stems.into_iter().filter(|s| !stop.contains_stem(s)).collect();
    if had_any && kept.is_empty() {
        log::warn!("every stem was a stop word; the document is now empty");
    }
    kept
}

/// Runs clean -> tokenize -> stem -> stop-word removal.
#[derive(Debug, Clone)]
pub struct Normalizer {
    stop: StopWordSet,
    min_token_len: usize,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new(StopWordSet::spanish(), DEFAULT_MIN_TOKEN_LEN)
    }
}

impl Normalizer {
    pub fn new(stop: StopWordSet, min_token_len: usize) -> Self {
        Normalizer { stop, min_token_len }
    }

    pub fn stop_words(&self) -> &StopWordSet {
        &self.stop
    }

    pub fn min_token_len(&self) -> usize {
        self.min_token_len
    }

    pub fn normalize(&self, candidate_id: &str, raw: &str) -> Result<TokenDocument, NormalizeError> {
        let tokens = tokenize(&clean_text(raw), self.min_token_len);
        let original_token_count = tokens.len();
        let stems = tokens.iter().map(|t| stem(t)).collect();
        let stems = remove_stopwords(stems, &self.stop);
        if stems.is_empty() {
            return Err(NormalizeError::EmptyDocument {
                candidate_id: candidate_id.into(),
            });
        }
        Ok(TokenDocument {
            candidate_id: candidate_id.into(),
            stems,
            original_token_count,
        })
    }
}

/// Normalizes every `(candidate_id, raw text)` pair, preserving input order.
pub fn normalize_corpus<'a, I>(
    corpora: I,
    normalizer: &Normalizer,
) -> Result<Vec<TokenDocument>, NormalizeError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let items: Vec<(&str, &str)> = corpora.into_iter().collect();
    if items.is_empty() {
        return Err(NormalizeError::EmptyCorpus);
    }

    #[cfg(feature = "parallel")]
    let docs = {
        use rayon::prelude::*;
        items
            .par_iter()
            .map(|(id, text)| normalizer.normalize(id, text))
            .collect::<Vec<_>>()
    };
    #[cfg(not(feature = "parallel"))]
    let docs = items
        .iter()
        .map(|(id, text)| normalizer.normalize(id, text))
        .collect::<Vec<_>>();

    docs.into_iter().collect()
}
