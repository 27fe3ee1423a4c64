//! Acceptance checks, one line per criterion:
//!
//! 1. stemmer against the Snowball Spanish reference vocabulary
//! 2. TF-IDF weights against a brute-force computation
//! 3. results unchanged between natural and base-10 logarithms
//! 4. pair-class ANOVA, class distributions and normality tests on the fixtures
//! 5. Spearman, Shapiro-Wilk and ANOVA against reference values
//! 6. kernel regression properties and runtime
//! 7. byte-identical reports across runs and thread counts

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use chrono::{FixedOffset, NaiveDate};
use electolex::report::Metric;
use electolex::{analyze, write_outputs, Analysis, RunConfig};
use electolex_core::kernelreg::{
    fit, lscv_bandwidths, nw_estimate, predictor_relevance, FitOptions, LscvOptions, RegressionDesign,
};
use electolex_core::normalize::stem;
use electolex_core::stats::{one_way_anova, rank_with_ties, shapiro_wilk, spearman, GroupedSamples};
use electolex_core::vectorize::{build_vocabulary, term_document_matrix, tfidf_weight};
use electolex_core::{LogBase, PairClass, TokenDocument};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

type Check = Result<String, String>;
type Outputs = BTreeMap<String, Vec<u8>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn fixture_config(name: &str, out: PathBuf) -> RunConfig {
    let dir = fixture_dir(name);
    let mut c = RunConfig::new(
        dir.join("candidates.csv"),
        dir.join("tweets.jsonl"),
        NaiveDate::from_ymd_opt(2015, 10, 1).unwrap(),
        NaiveDate::from_ymd_opt(2015, 10, 24).unwrap(),
        out,
    );
    c.utc_offset = FixedOffset::west_opt(5 * 3600).unwrap();
    c
}

fn stemmer_oracle() -> Check {
    let voc = include_str!("../../core/tests/data/snowball_es/voc.txt");
    let output = include_str!("../../core/tests/data/snowball_es/output.txt");
    let start = Instant::now();
    let total = voc.lines().count();
    let agree = voc.lines().zip(output.lines()).filter(|(w, e)| stem(w) == *e).count();
    let elapsed = start.elapsed().as_secs_f64();
    let rate = agree as f64 / total as f64;
    ensure!(total > 28_000, "only {total} reference words");
    ensure!(rate >= 0.999, "{agree}/{total} agree");
    ensure!(elapsed < 5.0, "took {elapsed:.2} s");
    for w in ["gobernación", "gobernadores"] {
        ensure!(stem(w) == "gobern", "{w} -> {}", stem(w));
    }
    Ok(format!("{agree}/{total} words agree ({:.3}%) in {elapsed:.2} s", 100.0 * rate))
}

fn tfidf_brute_force() -> Check {
    let texts = [
        "pais vot segur pais salud",
        "pais educ educ educ vot",
        "pais segur segur campo",
        "pais vot agu agu agu agu",
        "pais salud educ campo vot",
        "pais trabaj trabaj",
        "pais vot vot vot segur",
        "pais agu campo salud",
        "pais empleo trabaj empleo",
        "pais vot educ salud segur campo",
    ];
    let docs: Vec<TokenDocument> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| TokenDocument {
            candidate_id: format!("d{i:02}"),
            stems: t.split(' ').map(String::from).collect(),
            original_token_count: 0,
        })
        .collect();
    let vocab = build_vocabulary(&docs).map_err(|e| e.to_string())?;
    let w = tfidf_weight(&term_document_matrix(&docs, &vocab).map_err(|e| e.to_string())?);
    let n = docs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut zeros = 0;
    for (t, term) in vocab.terms().iter().enumerate() {
        let df = docs.iter().filter(|d| d.stems.contains(term)).count() as f64;
        for (d, doc) in docs.iter().enumerate() {
            let tf = doc.stems.iter().filter(|s| *s == term).count() as f64;
            let want = tf * (n / df).ln();
            let got = w.weight(t, d);
            if df == n {
                ensure!(got == 0.0, "{term} is in every document but weighs {got}");
                zeros += 1;
            } else if want == 0.0 {
                ensure!(got == 0.0, "{term} absent from {d} but weighs {got}");
            } else {
                worst = worst.max(((got - want) / want).abs());
            }
        }
    }
    ensure!(worst <= 1e-12, "relative error {worst:e}");
    ensure!(zeros == docs.len(), "expected one ubiquitous term");
    Ok(format!("{} weights, max relative error {worst:e}, ubiquitous term weighs 0", vocab.len() * docs.len()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn rank_statistics(a: &Analysis) -> Vec<f64> {
    let mut v = vec![a.report.anova_over_pair_classes.statistic];
    for m in a.report.spearman_by_class.values() {
        for c in &m.cells {
            if let Some(r) = &c.result {
                v.push(r.statistic);
            }
        }
    }
    let d: Vec<f64> = a.distances.iter().map(|r| r.distance).collect();
    v.extend(rank_with_ties(&d).unwrap());
    let md: Vec<f64> = a.candidates.iter().map(|r| r.mean_distance).collect();
    v.extend(rank_with_ties(&md).unwrap());
    v
}

fn log_base_invariance() -> Check {
    let mut ln = fixture_config("synthetic12", PathBuf::from("unused"));
    ln.n_perm = 199;
    let mut log10 = ln.clone();
    log10.log_base = LogBase::Ten;
    let a = analyze(&ln).map_err(|e| e.to_string())?;
    let b = analyze(&log10).map_err(|e| e.to_string())?;

    let (sa, sb) = (rank_statistics(&a), rank_statistics(&b));
    ensure!(sa.len() == sb.len(), "different number of statistics");
    let worst = max_diff(&sa, &sb);
    ensure!(worst <= 1e-9, "largest change {worst:e}");

    let ratio: Vec<f64> = a.distances.iter().zip(&b.distances).map(|(x, y)| x.distance / y.distance).collect();
    let spread = max_diff(&ratio, &vec![std::f64::consts::LN_10; ratio.len()]);
    let (ka, kb) = (&a.report.kernel_fit, &b.report.kernel_fit);
    let r2 = (ka.r_squared - kb.r_squared).abs();
    let same_p = ka.relevance_p == kb.relevance_p;
    Ok(format!(
        "{} statistics, max change {worst:e}; distances scale by ln 10 (max deviation {spread:e}); \
         kernel R2 change {r2:e}, relevance p-values {}",
        sa.len(),
        if same_p { "identical" } else { "differ" }
    ))
}

fn structural_reproduction() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for name in ["six", "synthetic12"] {
        let mut cfg = fixture_config(name, tmp.path().join(name));
        cfg.relevance = false;
        let a = analyze(&cfg).map_err(|e| format!("{name}: {e}"))?;
        write_outputs(&a, &cfg.out_dir).map_err(|e| e.to_string())?;
        let anova = serde_json::to_value(&a.report.anova_over_pair_classes).unwrap();
        ensure!(anova["df"][0] == 5, "{name}: df {}", anova["df"]);
        let dists = &a.report.pair_class_distances;
        ensure!(
            PairClass::ALL.iter().all(|c| dists[c].n > 0),
            "{name}: an empty pair class"
        );
        let boxplot = std::fs::read_to_string(cfg.out_dir.join("boxplot_data.csv")).unwrap();
        let mut classes: Vec<&str> = boxplot.lines().skip(1).filter_map(|l| l.split(',').next()).collect();
        classes.dedup();
        ensure!(classes.len() == 6, "{name}: boxplot data has classes {classes:?}");
        let keys: Vec<Metric> = a.report.normality.keys().copied().collect();
        ensure!(keys == Metric::ALL, "{name}: normality tests {keys:?}");
        notes.push(format!(
            "{name}: F(5, {}) = {:.3}",
            anova["df"][1], a.report.anova_over_pair_classes.statistic
        ));
    }
    Ok(format!("df_between = 5, six pair-class distributions, four Shapiro-Wilk tests; {}", notes.join(", ")))
}

#[derive(Deserialize)]
struct Reference {
    shapiro: Vec<ShapiroCase>,
    spearman_t: Vec<SpearmanCase>,
    anova: Vec<AnovaCase>,
}

#[derive(Deserialize)]
struct ShapiroCase {
    x: Vec<f64>,
    w: f64,
}

#[derive(Deserialize)]
struct SpearmanCase {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Deserialize)]
struct AnovaCase {
    groups: Vec<Vec<f64>>,
}

fn naive_pearson_of_ranks(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|a| {
                let less = v.iter().filter(|b| *b < a).count() as f64;
                let eq = v.iter().filter(|b| *b == a).count() as f64;
                less + (eq + 1.0) / 2.0
            })
            .collect()
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn statistics_oracles() -> Check {
    let r: Reference = serde_json::from_str(include_str!("../../core/tests/data/reference_stats.json"))
        .map_err(|e| e.to_string())?;
    let cases: Vec<&SpearmanCase> = r.spearman_t.iter().filter(|c| c.x.len() == 52).collect();
    ensure!(cases.len() == 100, "{} Spearman datasets", cases.len());
    let mut rho_err: f64 = 0.0;
    for c in &cases {
        let got = spearman(&c.x, &c.y).map_err(|e| e.to_string())?;
        rho_err = rho_err.max((got.statistic - naive_pearson_of_ranks(&c.x, &c.y)).abs());
    }
    ensure!(rho_err <= 1e-10, "Spearman error {rho_err:e}");

    ensure!(r.shapiro.len() == 20, "{} Shapiro-Wilk samples", r.shapiro.len());
    let mut w_err: f64 = 0.0;
    for c in &r.shapiro {
        let got = shapiro_wilk(&c.x).map_err(|e| e.to_string())?;
        w_err = w_err.max((got.statistic - c.w).abs());
    }
    ensure!(w_err <= 1e-4, "W error {w_err:e}");

    ensure!(r.anova.len() == 3, "{} ANOVA fixtures", r.anova.len());
    for c in &r.anova {
        let all: Vec<f64> = c.groups.iter().flatten().copied().collect();
        let grand = all.iter().sum::<f64>() / all.len() as f64;
        let (mut ssb, mut ssw) = (0.0, 0.0);
        for g in &c.groups {
            let m = g.iter().sum::<f64>() / g.len() as f64;
            ssb += g.len() as f64 * (m - grand) * (m - grand);
            ssw += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
        }
        let k = c.groups.len() as f64;
        let f = (ssb / (k - 1.0)) / (ssw / (all.len() as f64 - k));
        let samples: GroupedSamples<usize> = c.groups.iter().cloned().enumerate().collect();
        let got = one_way_anova(&samples).map_err(|e| e.to_string())?;
        ensure!(got.statistic == f, "ANOVA F {} vs {f}", got.statistic);
    }
    Ok(format!(
        "100 Spearman datasets (max error {rho_err:e}), 20 Shapiro-Wilk samples (max W error {w_err:.1e}), 3 ANOVA fixtures exact"
    ))
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn sd(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

fn design(y: Vec<f64>, cols: Vec<Vec<f64>>) -> RegressionDesign {
    let names = (0..cols.len()).map(|j| format!("x{j}")).collect();
    RegressionDesign::new(y, cols, names).unwrap()
}

fn kernel_properties() -> Check {
    const N: usize = 52;
    let start = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let signal: Vec<f64> = (0..N).map(|_| rng.gen_range(0.0..10.0)).collect();
    let noise: Vec<f64> = (0..N).map(|_| rng.gen_range(0.0..10.0)).collect();
    let y: Vec<f64> = signal
        .iter()
        .map(|v| 20.0 + 3.0 * v + 2.0 * (v * 0.8).sin() + 0.5 * normal(&mut rng))
        .collect();
    let d = design(y, vec![signal, noise.clone()]);

    let mean = d.y().iter().sum::<f64>() / N as f64;
    for i in 0..N {
        let got = nw_estimate(&d, &[1e12, 1e12], &d.row(i)).unwrap();
        ensure!((got - mean).abs() <= 1e-6, "infinite bandwidth gives {got}, mean {mean}");
    }

    let (lo, hi) = d.y().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let mut q = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let h = [10f64.powf(q.gen_range(-3.0..3.0)), 10f64.powf(q.gen_range(-3.0..3.0))];
        let x0 = [q.gen_range(-5.0..15.0), q.gen_range(-5.0..15.0)];
        let got = nw_estimate(&d, &h, &x0).unwrap();
        ensure!(got >= lo - 1e-9 && got <= hi + 1e-9, "prediction {got} outside [{lo}, {hi}]");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x: Vec<f64> = (0..N).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    let y: Vec<f64> = x.iter().map(|v| v.sin() + 0.3 * normal(&mut rng)).collect();
    let sine = design(y, vec![x.clone()]);
    let best = lscv_bandwidths(&sine, &LscvOptions::default()).map_err(|e| e.to_string())?;
    let s = sd(&x);
    for k in 0..50 {
        let h = s * 10f64.powf(-2.0 + 4.0 * k as f64 / 49.0);
        let cv = electolex_core::kernelreg::cv_score(&sine, &[h]).unwrap();
        ensure!(best.cv_score <= cv * (1.0 + 1e-9), "grid point h = {h} beats LSCV");
    }

    let f = fit(&d, &FitOptions::default()).map_err(|e| e.to_string())?;
    let ratio = f.bandwidths[1] / sd(&noise);
    let (p_signal, p_noise) = (f.relevance_p[0].unwrap(), f.relevance_p[1].unwrap());
    ensure!(ratio > 100.0, "noise bandwidth only {ratio:.1} sd");
    ensure!(p_noise > 0.05, "noise p = {p_noise}");
    ensure!(p_signal <= 0.05, "signal p = {p_signal}");
    ensure!(
        predictor_relevance(&d, 1, 999, electolex_core::kernelreg::DEFAULT_SEED).unwrap() == p_noise,
        "relevance test is not reproducible"
    );

    // four predictors at n = 52, 999 permutations each
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cols: Vec<Vec<f64>> = (0..4).map(|_| (0..N).map(|_| rng.gen_range(0.0..100.0)).collect()).collect();
    let y: Vec<f64> = (0..N).map(|_| 1000.0 + 50.0 * normal(&mut rng)).collect();
    fit(&design(y, cols), &FitOptions::default()).map_err(|e| e.to_string())?;

    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 60.0, "kernel suite took {elapsed:.1} s");
    Ok(format!(
        "mean limit, 1000 bounded queries, LSCV beats 50-point grid; noise h = {ratio:.2e} sd with p = {p_noise:.3}, \
         signal p = {p_signal:.3}; {elapsed:.1} s"
    ))
}

fn run_binary(cfg_dir: &Path, out: &Path, threads: Option<usize>) -> Result<Outputs, String> {
    let c = cfg_dir.join("candidates.csv");
    let t = cfg_dir.join("tweets.jsonl");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_electolex"));
    cmd.arg("run")
        .arg("--candidates")
        .arg(&c)
        .arg("--tweets")
        .arg(&t)
        .args(["--window-start", "2015-10-01", "--window-end", "2015-10-24", "--tz-offset", "-05:00"])
        .arg("--out")
        .arg(out);
    if let Some(n) = threads {
        cmd.args(["--threads", &n.to_string()]);
    }
    let o = cmd.output().map_err(|e| e.to_string())?;
    ensure!(o.status.success(), "run failed: {}", String::from_utf8_lossy(&o.stderr));
    electolex::pipeline::OUTPUT_FILES
        .iter()
        .map(|f| Ok((f.to_string(), std::fs::read(out.join(f)).map_err(|e| e.to_string())?)))
        .collect()
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = fixture_dir("synthetic12");
    let runs = [None, None, None, Some(1), Some(4), Some(8)];
    let mut outputs = Vec::new();
    for (i, threads) in runs.iter().enumerate() {
        outputs.push(run_binary(&dir, &tmp.path().join(format!("run{i}")), *threads)?);
    }
    for (i, o) in outputs.iter().enumerate().skip(1) {
        for (name, bytes) in o {
            ensure!(*bytes == outputs[0][name], "{name} differs in run {i} ({:?} threads)", runs[i]);
        }
    }
    let report = &outputs[0]["report.json"];
    Ok(format!(
        "report.json ({} bytes) and all CSV outputs identical over 3 runs and 1, 4, 8 threads",
        report.len()
    ))
}

fn main() {
    let checks: [(u8, &str, fn() -> Check); 7] = [
        (1, "stemmer oracle", stemmer_oracle),
        (2, "tf-idf correctness", tfidf_brute_force),
        (3, "log-base invariance", log_base_invariance),
        (4, "structural reproduction", structural_reproduction),
        (5, "statistics oracles", statistics_oracles),
        (6, "kernel regression properties", kernel_properties),
        (7, "end-to-end determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 7 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 7 acceptance criteria pass");
}
