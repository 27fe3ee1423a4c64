//! Vocabulary, sparse term-document counts and TF-IDF document vectors.
//!
//! A document's weight for term `t` is `tf(t) * log(|D| / df(t))`: the raw
//! count of `t` in the document times the log of the collection size over
//! the number of documents containing `t`. Terms found in every document get
//! weight zero and are not stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::normalize::TokenDocument;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VectorizeError {
    #[error("no documents given")]
    EmptyCollection,
    #[error("documents contain no terms")]
    NoTerms,
    #[error("stem {term:?} in document {candidate_id} is missing from the vocabulary")]
    UnknownTerm { term: String, candidate_id: String },
    #[error("vocabulary term {term:?} does not occur in any document")]
    UnusedTerm { term: String },
}

/// Sorted set of distinct stems; a term's position is its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn from_terms<I: IntoIterator<Item = String>>(terms: I) -> Self {
        let mut terms: Vec<String> = terms.into_iter().collect();
        terms.sort();
        terms.dedup();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { terms, index }
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Sorted union of all stems across `docs`.
pub fn build_vocabulary(docs: &[TokenDocument]) -> Result<Vocabulary, VectorizeError> {
    if docs.is_empty() {
        return Err(VectorizeError::EmptyCollection);
    }
    let vocab = Vocabulary::from_terms(docs.iter().flat_map(|d| d.stems.iter().cloned()));
    if vocab.is_empty() {
        return Err(VectorizeError::NoTerms);
    }
    Ok(vocab)
}

/// A vector stored as `(dimension, value)` pairs sorted by dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Builds a vector from entries sorted by strictly increasing index.
    ///
    /// # Panics
    /// If indices are unsorted, repeated, or not below `dim`.
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Self {
        assert!(
            entries.windows(2).all(|w| w[0].0 < w[1].0),
            "sparse entries must be sorted by index"
        );
        assert!(entries.last().is_none_or(|e| e.0 < dim), "index out of range");
        SparseVector { dim, entries }
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        SparseVector { dim: values.len(), entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.entries.iter().map(|(_, v)| v * v).sum())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

/// Raw stem counts, one sparse column per document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDocumentMatrix {
    vocab: Vocabulary,
    doc_ids: Vec<String>,
    /// Per document, `(term index, count)` sorted by term index; counts > 0.
    columns: Vec<Vec<(usize, u32)>>,
    document_frequency: Vec<usize>,
}

impl TermDocumentMatrix {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn column(&self, doc: usize) -> &[(usize, u32)] {
        &self.columns[doc]
    }

    pub fn count(&self, term: usize, doc: usize) -> u32 {
        let col = &self.columns[doc];
        col.binary_search_by_key(&term, |e| e.0).map_or(0, |i| col[i].1)
    }

    /// Number of documents containing each term, indexed like the vocabulary.
    pub fn document_frequency(&self) -> &[usize] {
        &self.document_frequency
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// Counts each vocabulary term in each document.
pub fn term_document_matrix(
    docs: &[TokenDocument],
    vocab: &Vocabulary,
) -> Result<TermDocumentMatrix, VectorizeError> {
    if docs.is_empty() {
        return Err(VectorizeError::EmptyCollection);
    }
    let mut columns = Vec::with_capacity(docs.len());
    let mut document_frequency = alloc::vec![0usize; vocab.len()];
    for doc in docs {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for s in &doc.stems {
            let t = vocab.index_of(s).ok_or_else(|| VectorizeError::UnknownTerm {
                term: s.clone(),
                candidate_id: doc.candidate_id.clone(),
            })?;
            *counts.entry(t).or_insert(0) += 1;
        }
        for &t in counts.keys() {
            document_frequency[t] += 1;
        }
        columns.push(counts.into_iter().collect());
    }
    if let Some(t) = document_frequency.iter().position(|&df| df == 0) {
        return Err(VectorizeError::UnusedTerm {
            term: vocab.terms[t].clone(),
        });
    }
    Ok(TermDocumentMatrix {
        vocab: vocab.clone(),
        doc_ids: docs.iter().map(|d| d.candidate_id.clone()).collect(),
        columns,
        document_frequency,
    })
}

/// Logarithm used for the inverse document frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => math::ln(x),
            LogBase::Ten => math::log10(x),
        }
    }
}

/// TF-IDF document vectors; column `i` is the vector of document `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    vocab: Vocabulary,
    doc_ids: Vec<String>,
    vectors: Vec<SparseVector>,
}

impl WeightedMatrix {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn vector(&self, doc: usize) -> &SparseVector {
        &self.vectors[doc]
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn weight(&self, term: usize, doc: usize) -> f64 {
        let e = &self.vectors[doc].entries;
        e.binary_search_by_key(&term, |x| x.0).map_or(0.0, |i| e[i].1)
    }

    pub fn nnz(&self) -> usize {
        self.vectors.iter().map(SparseVector::nnz).sum()
    }

    /// Rescales every document vector to unit Euclidean length. Off by
    /// default: zero vectors are left as they are.
    pub fn l2_normalized(mut self) -> Self {
        for v in &mut self.vectors {
            let norm = v.norm();
            if norm > 0.0 {
                for e in &mut v.entries {
                    e.1 /= norm;
                }
            }
        }
        self
    }

    /// `(term, doc_id, weight)` for every stored entry, document by document.
    pub fn triplets(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.vectors.iter().zip(&self.doc_ids).flat_map(move |(v, id)| {
            v.entries
                .iter()
                .map(move |&(t, w)| (self.vocab.terms[t].as_str(), id.as_str(), w))
        })
    }
}

/// TF-IDF weighting with the natural logarithm.
pub fn tfidf_weight(tdm: &TermDocumentMatrix) -> WeightedMatrix {
    tfidf_weight_with(tdm, LogBase::Natural)
}

pub fn tfidf_weight_with(tdm: &TermDocumentMatrix, base: LogBase) -> WeightedMatrix {
    let n_docs = tdm.n_docs() as f64;
    let idf: Vec<f64> = tdm
        .document_frequency
        .iter()
        .map(|&df| if df == tdm.n_docs() { 0.0 } else { base.log(n_docs / df as f64) })
        .collect();
    let vectors = tdm
        .columns
        .iter()
        .map(|col| {
            let entries = col
                .iter()
                .filter(|(t, _)| idf[*t] != 0.0)
                .map(|&(t, tf)| (t, f64::from(tf) * idf[t]))
                .collect();
            SparseVector { dim: tdm.vocab.len(), entries }
        })
        .collect();
    WeightedMatrix {
        vocab: tdm.vocab.clone(),
        doc_ids: tdm.doc_ids.clone(),
        vectors,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub stem: String,
    pub document_frequency: usize,
}

/// Stems ranked by how many documents contain them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
}

/// The `top_n` stems by document frequency, ties broken by stem.
pub fn document_frequency_table(tdm: &TermDocumentMatrix, top_n: usize) -> FrequencyTable {
    let mut rows: Vec<FrequencyRow> = tdm
        .vocab
        .terms
        .iter()
        .zip(&tdm.document_frequency)
        .map(|(stem, &df)| FrequencyRow {
            stem: stem.clone(),
            document_frequency: df,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.document_frequency
            .cmp(&a.document_frequency)
            .then_with(|| a.stem.cmp(&b.stem))
    });
    rows.truncate(top_n);
    FrequencyTable { rows }
}
