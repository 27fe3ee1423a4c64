//! Pairwise Euclidean distances between document vectors, labelled by the
//! ideology classes of the two candidates.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::candidate::{CandidateProfile, IdeologyClass};
use crate::math;
use crate::stats::GroupedSamples;
use crate::vectorize::{SparseVector, WeightedMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimilarityError {
    #[error("vector dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("candidate {0} does not appear in any distance record")]
    UnknownCandidate(String),
    #[error("document {0} has no candidate profile")]
    MissingProfile(String),
}

/// Unordered pair of ideology classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairClass {
    PP,
    II,
    AA,
    PI,
    PA,
    IA,
}

impl PairClass {
    pub const ALL: [PairClass; 6] = [
        PairClass::PP,
        PairClass::II,
        PairClass::AA,
        PairClass::PI,
        PairClass::PA,
        PairClass::IA,
    ];

    pub fn of(a: IdeologyClass, b: IdeologyClass) -> PairClass {
        use IdeologyClass::*;
        match (a.min(b), a.max(b)) {
            (Traditional, Traditional) => PairClass::PP,
            (Independent, Independent) => PairClass::II,
            (Alliance, Alliance) => PairClass::AA,
            (Traditional, Independent) => PairClass::PI,
            (Traditional, Alliance) => PairClass::PA,
            (Independent, Alliance) => PairClass::IA,
            _ => unreachable!("pair is ordered"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::PP => "PP",
            PairClass::II => "II",
            PairClass::AA => "AA",
            PairClass::PI => "PI",
            PairClass::PA => "PA",
            PairClass::IA => "IA",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_pair(a: &CandidateProfile, b: &CandidateProfile) -> PairClass {
    PairClass::of(a.ideology_class, b.ideology_class)
}

/// Distance between two candidates' document vectors; `candidate_a <
/// candidate_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub candidate_a: String,
    pub candidate_b: String,
    pub distance: f64,
    pub pair_class: PairClass,
}

/// Euclidean distance, visiting only coordinates nonzero in either vector.
pub fn euclidean_distance(x: &SparseVector, y: &SparseVector) -> Result<f64, SimilarityError> {
    if x.dim() != y.dim() {
        return Err(SimilarityError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let (a, b) = (x.entries(), y.entries());
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        let d = match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                i += 1;
                a[i - 1].1
            }
            core::cmp::Ordering::Greater => {
                j += 1;
                b[j - 1].1
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                a[i - 1].1 - b[j - 1].1
            }
        };
        sum += d * d;
    }
    sum += a[i..].iter().map(|e| e.1 * e.1).sum::<f64>();
    sum += b[j..].iter().map(|e| e.1 * e.1).sum::<f64>();
    Ok(math::sqrt(sum))
}

/// Every unordered pair of documents, sorted by `(candidate_a, candidate_b)`.
pub fn pairwise_distances(
    weights: &WeightedMatrix,
    profiles: &BTreeMap<String, CandidateProfile>,
) -> Result<Vec<DistanceRecord>, SimilarityError> {
    let ids = weights.doc_ids();
    let classes = ids
        .iter()
        .map(|id| {
            profiles
                .get(id)
                .map(|p| p.ideology_class)
                .ok_or_else(|| SimilarityError::MissingProfile(id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut pairs = Vec::with_capacity(ids.len() * ids.len().saturating_sub(1) / 2);
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            pairs.push((i, j));
        }
    }

    let record = |&(i, j): &(usize, usize)| -> Result<DistanceRecord, SimilarityError> {
        let distance = euclidean_distance(weights.vector(i), weights.vector(j))?;
        let (a, b) = if ids[i] <= ids[j] { (i, j) } else { (j, i) };
        Ok(DistanceRecord {
            candidate_a: ids[a].clone(),
            candidate_b: ids[b].clone(),
            distance,
            pair_class: PairClass::of(classes[i], classes[j]),
        })
    };

    #[cfg(feature = "parallel")]
    let records: Result<Vec<_>, _> = {
        use rayon::prelude::*;
        pairs.par_iter().map(record).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records: Result<Vec<_>, _> = pairs.iter().map(record).collect();

    let mut records = records?;
    records.sort_by(|x, y| {
        (&x.candidate_a, &x.candidate_b).cmp(&(&y.candidate_a, &y.candidate_b))
    });
    Ok(records)
}

/// Mean distance from `candidate_id` to every other candidate.
pub fn candidate_mean_distance(
    records: &[DistanceRecord],
    candidate_id: &str,
) -> Result<f64, SimilarityError> {
    let (sum, count) = records
        .iter()
        .filter(|r| r.candidate_a == candidate_id || r.candidate_b == candidate_id)
        .fold((0.0, 0usize), |(s, c), r| (s + r.distance, c + 1));
    if count == 0 {
        return Err(SimilarityError::UnknownCandidate(candidate_id.into()));
    }
    Ok(sum / count as f64)
}

/// Mean distance for every candidate appearing in `records`.
pub fn mean_distances(records: &[DistanceRecord]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for r in records {
        for id in [&r.candidate_a, &r.candidate_b] {
            let e = acc.entry(id.clone()).or_insert((0.0, 0));
            e.0 += r.distance;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect()
}

/// Distances grouped by pair class; classes without pairs are omitted.
pub fn group_by_pair_class(records: &[DistanceRecord]) -> GroupedSamples<PairClass> {
    let mut groups = GroupedSamples::new();
    for r in records {
        groups.push(r.pair_class, r.distance);
    }
    groups
}
