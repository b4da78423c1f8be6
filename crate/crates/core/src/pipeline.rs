//! Batch transformation of a corpus.
//!
//! Records are transformed in parallel but emitted in input order, so the
//! output only depends on the corpus, the selector and the config.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::corpus::{CorpusRecord, Target};
use crate::error::{Error, Result};
use crate::transform::{apply, InsertLocation, SitePolicy, TransformConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StrategyCounts {
    pub applied: usize,
    pub not_applicable: usize,
}

/// Summary written next to a transformed corpus. Every input record is
/// counted in exactly one of `applied`, `not_applicable`, `parse_errors`
/// and `failed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub selector: String,
    pub seed: u64,
    pub site_policy: SitePolicy,
    pub insert_location: InsertLocation,
    pub total: usize,
    pub applied: usize,
    pub not_applicable: usize,
    pub parse_errors: usize,
    /// Records on which a strategy produced unparsable output.
    pub failed: usize,
    pub outputs: usize,
    pub per_strategy: BTreeMap<String, StrategyCounts>,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub records: Vec<CorpusRecord>,
    pub manifest: Manifest,
}

enum RecordResult {
    Done {
        outputs: Vec<CorpusRecord>,
        tried: Vec<(&'static str, bool)>,
    },
    ParseError,
    Failed(Error),
}

impl Target {
    pub fn label(self) -> String {
        match self {
            Target::Strategy(s) => s.id.to_string(),
            Target::Category(c) => c.code().to_string(),
        }
    }
}

fn transform_record(
    record: &CorpusRecord,
    target: Target,
    config: &TransformConfig,
) -> RecordResult {
    let snippet = record.snippet();
    let single = matches!(target, Target::Strategy(_));
    let mut outputs = Vec::new();
    let mut tried = Vec::new();
    for s in target.eligible(record.language) {
        let outcome = match apply(s, &snippet, config) {
            Ok(o) => o,
            Err(Error::ParseErrors { .. }) => return RecordResult::ParseError,
            Err(e) => return RecordResult::Failed(e),
        };
        tried.push((s.id, outcome.is_applied()));
        let Some(text) = outcome.new_text else {
            continue;
        };
        let mut out = record.clone();
        out.code = text;
        if !single {
            out.id = format!("{}@{}", record.id, s.id);
            out.meta
                .insert("original_id".into(), Value::from(record.id.clone()));
        }
        out.meta.insert("strategy".into(), Value::from(s.id));
        out.meta
            .insert("sites".into(), Value::from(outcome.sites.len()));
        outputs.push(out);
    }
    RecordResult::Done { outputs, tried }
}

/// Transforms every record with the selected strategy, or with each
/// strategy of the selected category. With one strategy the output keeps
/// the record id; with a category ids become `<id>@<strategy>`. Only
/// applied outcomes are emitted. `strict` turns the first per-record
/// failure into an error.
pub fn run_batch(
    records: &[CorpusRecord],
    target: Target,
    config: &TransformConfig,
    jobs: Option<usize>,
    strict: bool,
) -> Result<BatchResult> {
    let work = || -> Vec<RecordResult> {
        records
            .par_iter()
            .map(|r| transform_record(r, target, config))
            .collect()
    };
    let results = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut manifest = Manifest {
        selector: target.label(),
        seed: config.seed,
        site_policy: config.site_policy,
        insert_location: config.insert_location,
        total: records.len(),
        applied: 0,
        not_applicable: 0,
        parse_errors: 0,
        failed: 0,
        outputs: 0,
        per_strategy: BTreeMap::new(),
    };
    let mut out = Vec::new();
    for (record, result) in records.iter().zip(results) {
        match result {
            RecordResult::Done { outputs, tried } => {
                for (id, applied) in tried {
                    let c = manifest.per_strategy.entry(id.to_string()).or_default();
                    if applied {
                        c.applied += 1;
                    } else {
                        c.not_applicable += 1;
                    }
                }
                if outputs.is_empty() {
                    manifest.not_applicable += 1;
                } else {
                    manifest.applied += 1;
                }
                out.extend(outputs);
            }
            RecordResult::ParseError if strict => {
                return Err(Error::ParseErrors {
                    id: record.id.clone(),
                });
            }
            RecordResult::ParseError => {
                log::warn!("{}: parse errors; skipped", record.id);
                manifest.parse_errors += 1;
            }
            RecordResult::Failed(e) if strict => return Err(e),
            RecordResult::Failed(e) => {
                log::warn!("{}: {e}", record.id);
                manifest.failed += 1;
            }
        }
    }
    manifest.outputs = out.len();
    Ok(BatchResult {
        records: out,
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Language;
    use crate::transform::{strategy, Category};

    fn corpus() -> Vec<CorpusRecord> {
        vec![
            CorpusRecord::new("a", Language::Java, "void f(int x) { x += 1; s(x); }"),
            CorpusRecord::new("b", Language::Java, "void g() { }"),
            CorpusRecord::new("c", Language::Java, "void h( { }"),
        ]
    }

    #[test]
    fn manifest_counts_sum_to_total() {
        let res = run_batch(
            &corpus(),
            Target::Strategy(strategy("GS-7").unwrap()),
            &TransformConfig::default(),
            Some(2),
            false,
        )
        .unwrap();
        let m = &res.manifest;
        assert_eq!(
            (m.applied, m.not_applicable, m.parse_errors, m.failed),
            (1, 1, 1, 0)
        );
        assert_eq!(res.records[0].id, "a");
        assert!(res.records[0].code.contains("x = x + 1"));
    }

    #[test]
    fn strict_mode_stops_on_parse_errors() {
        let err = run_batch(
            &corpus(),
            Target::Strategy(strategy("GS-7").unwrap()),
            &TransformConfig::default(),
            None,
            true,
        );
        assert!(matches!(err, Err(Error::ParseErrors { id }) if id == "c"));
    }

    #[test]
    fn python_only_token_strategies_never_apply_to_java() {
        let res = run_batch(
            &corpus(),
            Target::Category(Category::GrammaticalToken),
            &TransformConfig::default(),
            None,
            false,
        )
        .unwrap();
        for id in ["GT-1", "GT-2", "GT-5"] {
            assert!(!res.manifest.per_strategy.contains_key(id));
        }
        assert!(res.records.iter().all(|r| r.id.contains('@')));
    }
}
