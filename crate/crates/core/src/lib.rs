//! Pure algorithmic core of the electolex pipeline.
//!
//! Everything here works on in-memory values and needs only `alloc`: text
//! normalization and Spanish stemming, the term-document matrix and its TF-IDF
//! weighting, pairwise document distances, the rank/normality/variance tests,
//! and Nadaraya-Watson kernel regression with cross-validated bandwidths.
//! File formats, the report and the command line live in the `electolex`
//! crate.
//!
//! Enable the `parallel` feature to spread per-document and per-pair work over
//! a rayon pool. Results are identical with and without it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod candidate;
pub mod kernelreg;
pub mod normalize;
pub mod similarity;
pub mod stats;
pub mod vectorize;

mod math;

pub use candidate::{CandidateProfile, IdeologyClass};
pub use normalize::{Normalizer, StopWordSet, TokenDocument};
pub use similarity::{DistanceRecord, PairClass};
pub use stats::TestResult;
pub use vectorize::{FrequencyTable, LogBase, TermDocumentMatrix, Vocabulary, WeightedMatrix};
