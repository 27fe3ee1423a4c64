//! The stemmer against the Snowball Spanish sample vocabulary and its
//! expected output.

use std::time::Instant;

use electolex_core::normalize::stem;

const VOC: &str = include_str!("data/snowball_es/voc.txt");
const OUTPUT: &str = include_str!("data/snowball_es/output.txt");

#[test]
fn agrees_with_the_reference_vocabulary() {
    let words: Vec<&str> = VOC.lines().collect();
    let expected: Vec<&str> = OUTPUT.lines().collect();
    assert_eq!(words.len(), expected.len());
    assert!(words.len() > 28_000);

    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (w, e) in words.iter().zip(&expected) {
        let got = stem(w);
        if got != *e {
            mismatches.push(format!("{w}: {got} (expected {e})"));
        }
    }
    let elapsed = start.elapsed();

    let agreement = 1.0 - mismatches.len() as f64 / words.len() as f64;
    println!(
        "stemmer: {}/{} agree ({:.4}%), {:.2?}",
        words.len() - mismatches.len(),
        words.len(),
        agreement * 100.0,
        elapsed
    );
    for m in mismatches.iter().take(20) {
        println!("  {m}");
    }
    assert!(agreement >= 0.999, "agreement {agreement}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
}

#[test]
fn governor_forms_reduce_to_one_stem() {
    assert_eq!(stem("gobernación"), "gobern");
    assert_eq!(stem("gobernadores"), "gobern");
}
