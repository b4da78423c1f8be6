//! Runs every strategy over the committed sample corpora and classifies
//! each applied outcome against the per-category edit-shape laws.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use codemorph::corpus::{load_corpus, CorpusRecord};
use codemorph::syntax::{has_errors, parse_text, tokens_dfs, Language};
use codemorph::transform::{
    apply, list_strategies, token_delta, Category, Strategy, TokenDelta, TransformConfig,
};
use rayon::prelude::*;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(language: Language) -> Vec<CorpusRecord> {
    let name = match language {
        Language::Java => "java_sample.jsonl",
        Language::Python => "python_sample.jsonl",
    };
    load_corpus(data_dir().join(name), true).expect("sample corpus loads")
}

/// Shape required of an outcome's token delta for its category, if any.
pub fn shape_law(s: &Strategy) -> Option<&'static str> {
    match s.category {
        Category::GrammaticalToken | Category::Identifier => Some("substitution-only"),
        Category::InsertDelete => Some("insert-or-delete-only"),
        _ => None,
    }
}

pub fn obeys(law: &str, d: &TokenDelta) -> bool {
    match law {
        "substitution-only" => d.added == 0 && d.removed == 0,
        "insert-or-delete-only" => d.changed == 0 && (d.added == 0 || d.removed == 0),
        _ => true,
    }
}

#[derive(Debug, Default)]
pub struct StrategyTally {
    pub tried: usize,
    pub applied: usize,
    /// Applied outcomes that failed to re-parse cleanly, or errors.
    pub broken: Vec<String>,
    pub shape_violations: Vec<String>,
}

pub fn run(records: &[CorpusRecord]) -> BTreeMap<&'static str, StrategyTally> {
    let config = TransformConfig::default();
    let per: Vec<(&'static str, StrategyTally)> = list_strategies(None)
        .into_par_iter()
        .map(|s| {
            let mut t = StrategyTally::default();
            for r in records.iter().filter(|r| s.supports(r.language)) {
                t.tried += 1;
                let snippet = r.snippet();
                let out = match apply(s, &snippet, &config) {
                    Ok(o) => o,
                    Err(e) => {
                        t.broken.push(format!("{}: {e}", r.id));
                        continue;
                    }
                };
                let Some(text) = out.new_text else { continue };
                t.applied += 1;
                let after = match parse_text(r.language, &text) {
                    Ok(tree) if !has_errors(&tree) => tree,
                    _ => {
                        t.broken.push(format!("{}: output does not parse", r.id));
                        continue;
                    }
                };
                if let Some(law) = shape_law(s) {
                    let before = tokens_dfs(&parse_text(r.language, &r.code).unwrap()).into_texts();
                    let d = token_delta(&before, &tokens_dfs(&after).into_texts());
                    if !obeys(law, &d) {
                        t.shape_violations.push(format!("{}: {d:?}", r.id));
                    }
                }
            }
            (s.id, t)
        })
        .collect();
    per.into_iter().collect()
}
