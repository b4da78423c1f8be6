//! Acceptance gate. Prints one PASS/FAIL line per criterion followed by
//! indented details, and exits non-zero only when a criterion fails in a
//! way not listed in `KNOWN_REDS`.

#[path = "support/exec.rs"]
mod exec;
#[path = "../../core/tests/support/goldens.rs"]
mod goldens;
#[path = "../../core/tests/support/inverse.rs"]
mod inverse;
#[path = "../../core/tests/support/oracle.rs"]
mod oracle;
#[path = "../../core/tests/support/sample.rs"]
mod sample;

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use codemorph::metrics::{
    bleu, meteor, mrr, rouge_l, BleuParams, MeteorParams, RankList, RougeParams,
};
use codemorph::report::{improvement_pct, pct_cell, Direction, EvalPair};
use codemorph::syntax::{Language, SourceSnippet};
use codemorph::transform::{apply, list_strategies, strategy, InsertLocation, TransformConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the exact failure signature that is
/// tolerated. Anything else failing is a regression.
const KNOWN_REDS: &[(&str, &str)] = &[
    // print -> pass and an API swap that adds a token cannot be pure
    // substitutions of the token sequence
    ("preservation", "edit-shape violations: GT-6, ID-6"),
    // two printed cells disagree with their own before/after columns
    (
        "delta-arithmetic",
        "cells off: search T_GT rel python, search T_all rel python",
    ),
];

struct Outcome {
    name: &'static str,
    pass: bool,
    /// Short failure signature, compared against `KNOWN_REDS`.
    signature: String,
    details: Vec<String>,
}

fn outcome(name: &'static str, failures: Vec<String>, details: Vec<String>) -> Outcome {
    Outcome {
        name,
        pass: failures.is_empty(),
        signature: failures.join("; "),
        details,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn check_time(
    took: Duration,
    limit: Duration,
    failures: &mut Vec<String>,
    details: &mut Vec<String>,
) {
    details.push(format!("runtime {took:.2?} (limit {limit:?})"));
    if took > limit {
        failures.push(format!("runtime {took:.2?} over {limit:?}"));
    }
}

fn goldens() -> Outcome {
    const REQUIRED: &[&str] = &[
        "B-3", "B-4", "B-5", "B-6", "GS-2", "GS-4", "GS-5", "GS-6", "GS-7", "GS-8", "GT-1", "ID-6",
        "B-7",
    ];
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let (errors, took): (Vec<String>, _) = timed(|| {
        goldens::GOLDENS
            .iter()
            .filter_map(|g| {
                goldens::run(g)
                    .err()
                    .map(|e| format!("{} {:?}: {e}", g.strategy, g.language))
            })
            .collect()
    });
    check_time(took, Duration::from_secs(5), &mut failures, &mut details);
    let covered: BTreeSet<&str> = goldens::GOLDENS.iter().map(|g| g.strategy).collect();
    let missing: Vec<&str> = REQUIRED
        .iter()
        .copied()
        .filter(|s| !covered.contains(s))
        .collect();
    details.push(format!(
        "{} fixtures over {} strategies",
        goldens::GOLDENS.len(),
        covered.len()
    ));
    if !missing.is_empty() {
        failures.push(format!("no fixture for {}", missing.join(", ")));
    }
    if !errors.is_empty() {
        details.extend(errors.iter().cloned());
        failures.push(format!("{} fixtures differ", errors.len()));
    }
    outcome("goldens", failures, details)
}

fn preservation() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let java = sample::load(Language::Java);
    let python = sample::load(Language::Python);
    details.push(format!(
        "sample corpus: {} java, {} python",
        java.len(),
        python.len()
    ));
    if java.len() < 500 || python.len() < 500 {
        failures.push("sample corpus below 500 records per language".into());
    }
    let mut records = java;
    records.extend(python);
    let (tally, took) = timed(|| sample::run(&records));
    check_time(took, Duration::from_secs(60), &mut failures, &mut details);
    if tally.len() != 32 {
        failures.push(format!("{} strategies ran, expected 32", tally.len()));
    }
    let applied: usize = tally.values().map(|t| t.applied).sum();
    let broken: Vec<&str> = tally
        .iter()
        .filter(|(_, t)| !t.broken.is_empty())
        .map(|(id, _)| *id)
        .collect();
    let shape: Vec<&str> = tally
        .iter()
        .filter(|(_, t)| !t.shape_violations.is_empty())
        .map(|(id, _)| *id)
        .collect();
    details.push(format!("{applied} applied outcomes"));
    for (id, t) in &tally {
        if !t.broken.is_empty() || !t.shape_violations.is_empty() || t.applied == 0 {
            details.push(format!(
                "{id}: applied {}, unparsable {}, shape violations {}",
                t.applied,
                t.broken.len(),
                t.shape_violations.len()
            ));
        }
        for v in t.shape_violations.iter().take(1) {
            details.push(format!("  e.g. {v}"));
        }
    }
    if !broken.is_empty() {
        failures.push(format!("unparsable outputs: {}", broken.join(", ")));
    }
    if !shape.is_empty() {
        failures.push(format!("edit-shape violations: {}", shape.join(", ")));
    }
    outcome("preservation", failures, details)
}

fn inverse_pairs() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    for pair in inverse::PAIRS {
        let bad: Vec<String> = pair
            .fixtures
            .iter()
            .filter_map(|f| inverse::round_trip(pair, f).err())
            .collect();
        details.push(format!(
            "{}∘{} {:?}: {}/{} restored",
            pair.backward,
            pair.forward,
            pair.language,
            pair.fixtures.len() - bad.len(),
            pair.fixtures.len()
        ));
        if pair.fixtures.len() < 10 {
            failures.push(format!(
                "{}∘{} has fewer than 10 fixtures",
                pair.backward, pair.forward
            ));
        }
        if !bad.is_empty() {
            failures.push(format!("{}∘{} changed tokens", pair.backward, pair.forward));
            details.extend(bad);
        }
    }
    let pairs: BTreeSet<(&str, &str)> = inverse::PAIRS
        .iter()
        .map(|p| (p.forward, p.backward))
        .collect();
    for want in [("B-3", "B-4"), ("GT-1", "GT-2"), ("GS-9", "GS-10")] {
        if !pairs.contains(&want) {
            failures.push(format!("no fixtures for {}∘{}", want.1, want.0));
        }
    }
    outcome("inverse-pairs", failures, details)
}

fn execution() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let start = Instant::now();
    {
        for lang in [Language::Java, Language::Python] {
            match exec::check(lang) {
                Ok(s) => {
                    details.push(format!(
                        "{lang:?}: {} fixtures, {} variants compared, {} strategies exercised",
                        s.fixtures,
                        s.compared,
                        s.exercised.len()
                    ));
                    if s.fixtures < 10 {
                        failures.push(format!("{lang:?}: only {} fixtures", s.fixtures));
                    }
                    if !s.mismatches.is_empty() {
                        failures.push(format!(
                            "{lang:?}: {} output mismatches",
                            s.mismatches.len()
                        ));
                        details.extend(s.mismatches);
                    }
                }
                Err(e) => failures.push(format!("{lang:?}: {e}")),
            }
        }
    }
    check_time(
        start.elapsed(),
        Duration::from_secs(120),
        &mut failures,
        &mut details,
    );
    outcome("execution", failures, details)
}

fn metric_oracles() -> Outcome {
    const VOCAB: [&str; 5] = ["a", "b", "c", "d", "e"];
    const CASES: usize = 200;
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tokens = |rng: &mut ChaCha8Rng| -> Vec<&'static str> {
        let len = rng.gen_range(0..=8);
        (0..len)
            .map(|_| VOCAB[rng.gen_range(0..VOCAB.len())])
            .collect()
    };
    let mut worst = [0f64; 4];
    for _ in 0..CASES {
        let c = tokens(&mut rng);
        let r = tokens(&mut rng);
        let b = bleu(&c, &r, &BleuParams::default()).unwrap().value;
        worst[0] = worst[0].max((b - oracle::bleu(&c, &r, 4, &[0.25; 4], true)).abs());
        let l = rouge_l(&c, &r, &RougeParams::default()).unwrap().value;
        worst[1] = worst[1].max((l - oracle::rouge_l(&c, &r, 1.2)).abs());
        let m = meteor(&c, &r, &MeteorParams::default()).unwrap().value;
        worst[2] = worst[2].max((m - oracle::meteor(&c, &r)).abs());
        let len = rng.gen_range(1..=10);
        let ranks: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=20)).collect();
        let got = mrr(&RankList::new(ranks.clone()).unwrap()).unwrap();
        worst[3] = worst[3].max((got - oracle::mrr(&ranks)).abs());
    }
    for (name, w) in ["BLEU", "ROUGE-L", "METEOR", "MRR"].iter().zip(worst) {
        details.push(format!(
            "{name}: {CASES} random instances, max |diff| {w:.1e}"
        ));
        if w > 1e-9 {
            failures.push(format!("{name} differs from oracle by {w:e}"));
        }
    }
    let r = rouge_l(&["a", "b", "c"], &["a", "c"], &RougeParams::default())
        .unwrap()
        .value;
    details.push(format!("ROUGE-L worked example {r:.4}"));
    if format!("{r:.4}") != "0.8299" {
        failures.push(format!("ROUGE-L worked example gave {r:.4}"));
    }
    let m = mrr(&RankList::new(vec![1, 2, 4]).unwrap()).unwrap();
    details.push(format!("MRR worked example {m}"));
    if m != 7.0 / 12.0 {
        failures.push(format!("MRR worked example gave {m}"));
    }
    outcome("metric-oracles", failures, details)
}

fn delta_arithmetic() -> Outcome {
    const TOL: f64 = 0.02;
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/reference_tables.tsv");
    let text = fs::read_to_string(&path).expect("reference tables");
    let mut off = Vec::new();
    let mut cells = 0;
    let start = Instant::now();
    {
        for line in text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        {
            let f: Vec<&str> = line.split('\t').collect();
            let (before, after): (f64, f64) = (f[4].parse().unwrap(), f[5].parse().unwrap());
            let printed: f64 = f[7].parse().unwrap();
            let imp = improvement_pct(&EvalPair::new("MRR", before, after)).unwrap();
            let want_dir = if f[6] == "down" {
                Direction::Decrease
            } else {
                Direction::Increase
            };
            cells += 1;
            let diff = (imp.abs() - printed).abs();
            if Direction::of(imp) != want_dir || diff > TOL {
                let cell = format!("{} {} {} {}", f[0], f[1], f[2], f[3]);
                details.push(format!(
                    "{cell}: ({before}, {after}) gives {imp:.4} ({}), printed {} {printed:.2}, off by {diff:.4}",
                    pct_cell(imp),
                    if f[6] == "down" { "↓" } else { "↑" },
                ));
                off.push(cell);
            }
        }
    }
    check_time(
        start.elapsed(),
        Duration::from_secs(1),
        &mut failures,
        &mut details,
    );
    details.insert(0, format!("{cells} cells checked, tolerance ±{TOL}"));
    if cells != 48 {
        failures.push(format!("expected 48 cells, read {cells}"));
    }
    if !off.is_empty() {
        failures.push(format!("cells off: {}", off.join(", ")));
    }
    outcome("delta-arithmetic", failures, details)
}

fn batch(corpus: &Path, out: &Path, category: &str) -> Result<Vec<u8>, String> {
    let res = Command::new(env!("CARGO_BIN_EXE_codemorph"))
        .arg("batch")
        .arg(corpus)
        .args([
            "--category",
            category,
            "--seed",
            "42",
            "--site-policy",
            "random-one",
            "--out",
        ])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !res.status.success() {
        return Err(String::from_utf8_lossy(&res.stderr).into_owned());
    }
    let mut bytes = fs::read(out).map_err(|e| e.to_string())?;
    let mut manifest = out.as_os_str().to_owned();
    manifest.push(".manifest.json");
    bytes.extend(fs::read(manifest).map_err(|e| e.to_string())?);
    Ok(bytes)
}

fn determinism() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let dir = tempfile::tempdir().unwrap();
    for name in ["java_sample.jsonl", "python_sample.jsonl"] {
        let corpus = sample::data_dir().join(name);
        for cat in ["T_B", "T_ID", "T_GS", "T_GT", "T_I"] {
            let a = batch(&corpus, &dir.path().join("a.jsonl"), cat);
            let b = batch(&corpus, &dir.path().join("b.jsonl"), cat);
            match (a, b) {
                (Ok(a), Ok(b)) if a == b => {
                    details.push(format!("{name} {cat}: {} identical bytes", a.len()))
                }
                (Ok(_), Ok(_)) => failures.push(format!("{name} {cat}: outputs differ")),
                (Err(e), _) | (_, Err(e)) => failures.push(format!("{name} {cat}: {e}")),
            }
        }
    }
    outcome("determinism", failures, details)
}

/// Token index of the first token containing `needle`.
fn token_index(language: Language, text: &str, needle: &str) -> Option<usize> {
    let tree = codemorph::syntax::parse_text(language, text).ok()?;
    codemorph::syntax::tokens_dfs(&tree)
        .texts()
        .iter()
        .position(|t| t.contains(needle))
}

fn junk_locations() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let fixtures = [
        (
            Language::Java,
            "void f() {\n    int a = 1;\n    int b = 2;\n    int c = 3;\n}\n",
            "int a",
            "int c",
        ),
        (
            Language::Python,
            "def f():\n    a = 1\n    b = 2\n    c = 3\n",
            "a = 1",
            "c = 3",
        ),
    ];
    for (lang, src, first, last) in fixtures {
        let mut outputs = BTreeSet::new();
        for loc in [
            InsertLocation::Front,
            InsertLocation::Middle,
            InsertLocation::End,
        ] {
            let config = TransformConfig {
                insert_location: loc,
                junk_template_index: Some(0),
                ..TransformConfig::default()
            };
            let out = apply(
                strategy("ID-2").unwrap(),
                &SourceSnippet::new("junk", lang, src),
                &config,
            );
            let Some(text) = out.ok().and_then(|o| o.new_text) else {
                failures.push(format!("{lang:?} {loc:?}: not applied"));
                continue;
            };
            let junk = token_index(lang, &text, "junk");
            let a = token_index(lang, &text, first.split_whitespace().last().unwrap());
            let c = token_index(lang, &text, last.split_whitespace().last().unwrap());
            let placed = match (junk, a, c) {
                (Some(j), Some(a), Some(c)) => match loc {
                    InsertLocation::Front => j < a,
                    InsertLocation::Middle => a < j && j < c,
                    InsertLocation::End => j > c,
                },
                _ => false,
            };
            details.push(format!("{lang:?} {loc:?}: {}", text.replace('\n', "⏎")));
            if !placed {
                failures.push(format!("{lang:?} {loc:?}: junk in the wrong place"));
            }
            outputs.insert(text);
        }
        if outputs.len() != 3 {
            failures.push(format!(
                "{lang:?}: {} distinct outputs, expected 3",
                outputs.len()
            ));
        }
    }
    outcome("junk-locations", failures, details)
}

fn catalog_counts() -> Outcome {
    let (mut failures, mut details) = (Vec::new(), Vec::new());
    let counts = [
        list_strategies(None).len(),
        list_strategies(Some(Language::Java)).len(),
        list_strategies(Some(Language::Python)).len(),
    ];
    let listed = |args: &[&str]| -> usize {
        let out = Command::new(env!("CARGO_BIN_EXE_codemorph"))
            .arg("list")
            .args(args)
            .output()
            .unwrap();
        String::from_utf8_lossy(&out.stdout).lines().count()
    };
    let cli = [
        listed(&[]),
        listed(&["--language", "java"]),
        listed(&["--language", "python"]),
    ];
    details.push(format!("library total/java/python {counts:?}, cli {cli:?}"));
    if counts != [32, 28, 25] || cli != counts {
        failures.push(format!(
            "counts {counts:?} / {cli:?}, expected [32, 28, 25]"
        ));
    }
    let help = Command::new(env!("CARGO_BIN_EXE_codemorph"))
        .arg("--help")
        .output()
        .unwrap();
    let help = String::from_utf8_lossy(&help.stdout);
    let documented = [
        "32 strategies",
        "28 are defined for Java",
        "25 for Python",
        "24 and 27",
    ]
    .iter()
    .all(|s| help.contains(s));
    details.push(format!(
        "--help documents the count discrepancy: {documented}"
    ));
    if !documented {
        failures.push("--help lacks the strategy-count note".into());
    }
    outcome("catalog-counts", failures, details)
}

fn main() {
    // `cargo test -- <filter>` passes arguments; this gate always runs everything.
    let criteria: [fn() -> Outcome; 9] = [
        goldens,
        preservation,
        inverse_pairs,
        execution,
        metric_oracles,
        delta_arithmetic,
        determinism,
        junk_locations,
        catalog_counts,
    ];
    let mut unexpected = Vec::new();
    for run in criteria {
        let o = run();
        println!("{} {}", if o.pass { "PASS" } else { "FAIL" }, o.name);
        for d in &o.details {
            println!("    {d}");
        }
        if !o.pass {
            println!("    failure: {}", o.signature);
            let known = KNOWN_REDS
                .iter()
                .any(|(n, sig)| *n == o.name && *sig == o.signature);
            if known {
                println!("    known red, see Known gaps in README.md");
            } else {
                unexpected.push(o.name);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
