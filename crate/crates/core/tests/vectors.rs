//! TF-IDF weights and document distances against dense brute-force versions.

use std::collections::BTreeMap;

use electolex_core::similarity::{euclidean_distance, pairwise_distances};
use electolex_core::vectorize::{
    build_vocabulary, document_frequency_table, term_document_matrix, tfidf_weight,
    tfidf_weight_with, SparseVector,
};
use electolex_core::{CandidateProfile, IdeologyClass, LogBase, TokenDocument};
use proptest::prelude::*;

fn doc(id: &str, text: &str) -> TokenDocument {
    TokenDocument {
        candidate_id: id.into(),
        stems: text.split_whitespace().map(String::from).collect(),
        original_token_count: 0,
    }
}

fn ten_docs() -> Vec<TokenDocument> {
    vec![
        doc("c01", "pais vot segur pais salud"),
        doc("c02", "pais educ educ educ vot"),
        doc("c03", "pais segur segur campo"),
        doc("c04", "pais vot agu agu agu agu"),
        doc("c05", "pais salud educ campo vot"),
        doc("c06", "pais trabaj trabaj"),
        doc("c07", "pais vot vot vot segur"),
        doc("c08", "pais agu campo salud"),
        doc("c09", "pais empleo trabaj empleo"),
        doc("c10", "pais vot educ salud segur campo"),
    ]
}

/// Dense weights straight from the definition: tf * ln(|D| / df).
fn brute_force(docs: &[TokenDocument]) -> BTreeMap<(String, String), f64> {
    let n = docs.len() as f64;
    let mut terms: Vec<&str> = docs.iter().flat_map(|d| d.stems.iter().map(String::as_str)).collect();
    terms.sort();
    terms.dedup();
    let mut out = BTreeMap::new();
    for t in &terms {
        let df = docs.iter().filter(|d| d.stems.iter().any(|s| s == t)).count() as f64;
        for d in docs {
            let tf = d.stems.iter().filter(|s| s == t).count() as f64;
            out.insert((t.to_string(), d.candidate_id.clone()), tf * (n / df).ln());
        }
    }
    out
}

#[test]
fn tfidf_matches_the_definition() {
    let docs = ten_docs();
    let vocab = build_vocabulary(&docs).unwrap();
    let tdm = term_document_matrix(&docs, &vocab).unwrap();
    let w = tfidf_weight(&tdm);
    let oracle = brute_force(&docs);
    let mut checked = 0;
    for ((term, id), expected) in &oracle {
        let t = vocab.index_of(term).unwrap();
        let d = w.doc_ids().iter().position(|x| x == id).unwrap();
        let got = w.weight(t, d);
        if *expected == 0.0 {
            assert_eq!(got, 0.0, "{term} in {id}");
        } else {
            assert!(((got - expected) / expected).abs() <= 1e-12, "{term} in {id}: {got} vs {expected}");
        }
        checked += 1;
    }
    assert_eq!(checked, vocab.len() * docs.len());

    // "pais" is in every document
    let pais = vocab.index_of("pais").unwrap();
    for d in 0..docs.len() {
        assert_eq!(w.weight(pais, d), 0.0);
        assert!(w.vector(d).entries().iter().all(|(t, _)| *t != pais));
    }
}

#[test]
fn log_base_only_rescales_weights() {
    let docs = ten_docs();
    let tdm = term_document_matrix(&docs, &build_vocabulary(&docs).unwrap()).unwrap();
    let ln = tfidf_weight_with(&tdm, LogBase::Natural);
    let lg = tfidf_weight_with(&tdm, LogBase::Ten);
    for (a, b) in ln.vectors().iter().zip(lg.vectors()) {
        for ((ta, wa), (tb, wb)) in a.entries().iter().zip(b.entries()) {
            assert_eq!(ta, tb);
            assert!((wa / wb - std::f64::consts::LN_10).abs() < 1e-12);
        }
    }
}

#[test]
fn frequency_table_counts_documents() {
    let docs = ten_docs();
    let tdm = term_document_matrix(&docs, &build_vocabulary(&docs).unwrap()).unwrap();
    let table = document_frequency_table(&tdm, 5);
    let rows: Vec<(&str, usize)> = table.rows.iter().map(|r| (r.stem.as_str(), r.document_frequency)).collect();
    assert_eq!(rows, vec![("pais", 10), ("vot", 6), ("campo", 4), ("salud", 4), ("segur", 4)]);
}

fn profile(id: &str, class: IdeologyClass) -> CandidateProfile {
    CandidateProfile {
        candidate_id: id.into(),
        twitter_username: id.into(),
        party_name: "x".into(),
        ideology_class: class,
        department: "d".into(),
        votes_received: 1,
        followers: 1,
    }
}

#[test]
fn pairwise_distances_match_dense_euclidean() {
    let docs = ten_docs();
    let tdm = term_document_matrix(&docs, &build_vocabulary(&docs).unwrap()).unwrap();
    let w = tfidf_weight(&tdm);
    let classes = [IdeologyClass::Traditional, IdeologyClass::Independent, IdeologyClass::Alliance];
    let profiles: BTreeMap<String, CandidateProfile> = docs
        .iter()
        .enumerate()
        .map(|(i, d)| (d.candidate_id.clone(), profile(&d.candidate_id, classes[i % 3])))
        .collect();
    let records = pairwise_distances(&w, &profiles).unwrap();
    assert_eq!(records.len(), 45);
    for r in &records {
        let a = w.doc_ids().iter().position(|x| *x == r.candidate_a).unwrap();
        let b = w.doc_ids().iter().position(|x| *x == r.candidate_b).unwrap();
        let (x, y) = (w.vector(a).to_dense(), w.vector(b).to_dense());
        let dense: f64 = x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        assert!((r.distance - dense).abs() <= 1e-12 * dense.max(1.0));
        assert!(r.candidate_a < r.candidate_b);
    }
}

fn sparse_strategy(dim: usize) -> impl Strategy<Value = SparseVector> {
    prop::collection::vec(prop_oneof![Just(0.0), -50.0..50.0f64], dim)
        .prop_map(|v| SparseVector::from_dense(&v))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn distance_is_a_metric(
        x in sparse_strategy(12),
        y in sparse_strategy(12),
        z in sparse_strategy(12),
    ) {
        let dxy = euclidean_distance(&x, &y).unwrap();
        let dyx = euclidean_distance(&y, &x).unwrap();
        let dxz = euclidean_distance(&x, &z).unwrap();
        let dzy = euclidean_distance(&z, &y).unwrap();
        prop_assert_eq!(euclidean_distance(&x, &x).unwrap(), 0.0);
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(dxy, dyx);
        prop_assert!(dxy <= dxz + dzy + 1e-9);
    }
}
