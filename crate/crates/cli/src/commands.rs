use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use codemorph::corpus::{
    chunk_tokens, filter_transformable, load_corpus, preprocess_tokens, write_corpus, CorpusRecord,
    SymbolNameTable, Target,
};
use codemorph::metrics::io::{align, rank_list, read_rank_file, read_token_file};
use codemorph::metrics::{corpus_mrr, corpus_score, Metric, MetricParams};
use codemorph::pipeline::run_batch;
use codemorph::report::{
    average_runs, build_report, pairs_from_scores, render, EvalPair, Format, ScoreEntry, TallMode,
    Task, Variant,
};
use codemorph::syntax::{parse, tokens_dfs_with, EditSet, Language, SourceSnippet, TokenMode};
use codemorph::transform::{
    apply, list_strategies, strategy, verify_preservation_with, Category, Status, TransformConfig,
    TransformOutcome, VerifyOptions,
};
use codemorph::Error;
use serde_json::json;

use crate::{
    ApplyArgs, BatchArgs, Command, FilterArgs, ListArgs, MetricsArgs, ReportArgs, Selector,
    TokensArgs, TransformArgs, VerifyArgs,
};

/// Bad flag values and similar caller mistakes; exits with code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

const NOT_APPLICABLE: u8 = 3;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::List(a) => list(a),
        Command::Apply(a) => apply_cmd(a),
        Command::Batch(a) => batch(a),
        Command::Filter(a) => filter(a),
        Command::Tokens(a) => tokens(a),
        Command::Verify(a) => verify(a),
        Command::Metrics(a) => metrics(a),
        Command::Report(a) => report(a),
    }
}

fn usage<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| UsageError(e.to_string()).into())
}

fn parse_language(s: &str) -> Result<Language> {
    usage(s.parse())
}

fn language_for(path: &Path, flag: Option<&str>) -> Result<Language> {
    if let Some(l) = flag {
        return parse_language(l);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("java") => Ok(Language::Java),
        Some("py") => Ok(Language::Python),
        _ => Err(UsageError(format!(
            "cannot infer the language of {}; pass --language",
            path.display()
        ))
        .into()),
    }
}

fn read_source(path: &Path, language: Language) -> Result<SourceSnippet> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let id = path.display().to_string();
    Ok(SourceSnippet::from_bytes(id, language, bytes)?)
}

fn config(t: &TransformArgs) -> Result<TransformConfig> {
    Ok(TransformConfig {
        seed: t.seed,
        site_policy: usage(t.site_policy.parse())?,
        insert_location: usage(t.insert_location.parse())?,
        junk_template_index: t.junk_template,
        verify_cmd: None,
    })
}

fn target(sel: &Selector) -> Result<Target> {
    match (&sel.strategy, &sel.category) {
        (Some(s), None) => Ok(Target::Strategy(usage(strategy(s))?)),
        (None, Some(c)) => Ok(Target::Category(usage(c.parse::<Category>())?)),
        _ => Err(UsageError("pass exactly one of --strategy and --category".into()).into()),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn list(a: ListArgs) -> Result<ExitCode> {
    let language = a.language.as_deref().map(parse_language).transpose()?;
    let category = a
        .category
        .as_deref()
        .map(|c| usage(c.parse::<Category>()))
        .transpose()?;
    let rows: Vec<_> = list_strategies(language)
        .into_iter()
        .filter(|s| category.is_none_or(|c| s.category == c))
        .collect();
    let mut out = String::new();
    if a.json {
        out = serde_json::to_string_pretty(&rows)?;
        out.push('\n');
    } else {
        for s in rows {
            let langs: Vec<&str> = s.languages.iter().map(|l| l.as_str()).collect();
            out.push_str(&format!(
                "{:<6}{:<6}{:<13}{}: {}\n",
                s.id,
                s.category.code(),
                langs.join(","),
                s.name,
                s.description
            ));
        }
    }
    write_output(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn apply_cmd(a: ApplyArgs) -> Result<ExitCode> {
    let strat = usage(strategy(&a.strategy))?;
    let language = language_for(&a.input, a.language.as_deref())?;
    let cfg = config(&a.transform)?;
    let snippet = read_source(&a.input, language)?;
    let outcome = match apply(strat, &snippet, &cfg) {
        Ok(o) => o,
        Err(e @ Error::LanguageMismatch { .. }) => {
            eprintln!("not applicable: {e}");
            return Ok(ExitCode::from(NOT_APPLICABLE));
        }
        Err(e) => return Err(e.into()),
    };
    match outcome.new_text {
        Some(text) => {
            log::info!("{}: {} site(s) rewritten", strat.id, outcome.sites.len());
            write_output(a.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!(
                "not applicable: {}",
                outcome.reason.as_deref().unwrap_or("no site found")
            );
            Ok(ExitCode::from(NOT_APPLICABLE))
        }
    }
}

fn load(path: &Path, strict: bool) -> Result<Vec<CorpusRecord>> {
    load_corpus(path, strict).with_context(|| format!("loading {}", path.display()))
}

fn batch(a: BatchArgs) -> Result<ExitCode> {
    let target = target(&a.selector)?;
    let cfg = config(&a.transform)?;
    if a.jobs == Some(0) {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    let records = load(&a.corpus, a.strict)?;
    let result = run_batch(&records, target, &cfg, a.jobs, a.strict)?;
    write_corpus(&result.records, &a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    let manifest_path = a.manifest.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".manifest.json");
        PathBuf::from(p)
    });
    let mut text = serde_json::to_string_pretty(&result.manifest)?;
    text.push('\n');
    fs::write(&manifest_path, text)
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    let m = &result.manifest;
    log::info!(
        "{}: {} applied, {} not applicable, {} parse errors, {} failed of {}",
        m.selector,
        m.applied,
        m.not_applicable,
        m.parse_errors,
        m.failed,
        m.total
    );
    Ok(ExitCode::SUCCESS)
}

fn filter(a: FilterArgs) -> Result<ExitCode> {
    let target = target(&a.selector)?;
    let language = parse_language(&a.language)?;
    let records = load(&a.corpus, a.strict)?;
    let result = filter_transformable(records, target, language, &TransformConfig::default());
    write_corpus(&result.kept, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    let mut stats = serde_json::to_string_pretty(&result.stats)?;
    stats.push('\n');
    match &a.stats {
        Some(p) => fs::write(p, stats).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{stats}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn token_texts(
    snippet: &SourceSnippet,
    mode: TokenMode,
    table: Option<&SymbolNameTable>,
) -> Result<Vec<String>> {
    let tree = parse(snippet)?;
    let seq = tokens_dfs_with(&tree, mode);
    Ok(match table {
        Some(t) => preprocess_tokens(seq, t).into_texts(),
        None => seq.into_texts(),
    })
}

fn tokens(a: TokensArgs) -> Result<ExitCode> {
    let mode = if a.code_only {
        TokenMode::CodeOnly
    } else {
        TokenMode::All
    };
    let table = a.search.then(SymbolNameTable::builtin);
    if !a.corpus {
        if a.split.is_some() {
            return Err(UsageError("--split needs --corpus".into()).into());
        }
        let language = language_for(&a.input, a.language.as_deref())?;
        let snippet = read_source(&a.input, language)?;
        let mut out = token_texts(&snippet, mode, table.as_ref())?.join("\n");
        out.push('\n');
        write_output(None, &out)?;
        return Ok(ExitCode::SUCCESS);
    }
    if a.split == Some(0) {
        return Err(UsageError("--split must be at least 1".into()).into());
    }
    let records = load(&a.input, false)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for r in &records {
        let toks = token_texts(&r.snippet(), mode, table.as_ref())?;
        match a.split {
            Some(n) if toks.len() > n => {
                for (k, chunk) in chunk_tokens(&toks, n).into_iter().enumerate() {
                    let id = format!("{}#{k}", r.id);
                    writeln!(out, "{}", json!({"id": id, "tokens": chunk}))?;
                }
            }
            _ => writeln!(out, "{}", json!({"id": r.id, "tokens": toks}))?,
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let language = language_for(&a.original, a.language.as_deref())?;
    let original = read_source(&a.original, language)?;
    let transformed = read_source(&a.transformed, language)?;
    let outcome = TransformOutcome {
        strategy: "external".into(),
        status: Status::Applied,
        new_text: Some(transformed.text),
        edits: EditSet::new(),
        sites: Vec::new(),
        reason: None,
    };
    let options = VerifyOptions {
        token_mode: if a.code_only {
            TokenMode::CodeOnly
        } else {
            TokenMode::All
        },
        verify_cmd: a.verify_cmd.as_deref(),
    };
    let report = verify_preservation_with(&original, &outcome, &options);
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_output(None, &text)?;
    let external_failed = report
        .notes
        .iter()
        .any(|n| n.starts_with("verify_cmd: fail"));
    Ok(if report.parse_valid && !external_failed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn text_metrics(names: &[String]) -> Result<Vec<Metric>> {
    names
        .iter()
        .map(|n| {
            let m: Metric = usage(n.parse())?;
            if m == Metric::Mrr {
                bail!(UsageError(
                    "MRR is computed from rank files; use --ranks".into()
                ));
            }
            Ok(m)
        })
        .collect()
}

fn metric_params(corpus_bleu: bool) -> MetricParams {
    MetricParams {
        corpus_bleu,
        ..MetricParams::default()
    }
}

/// Scores of one prediction file: text metrics against references, or MRR.
fn score_file(
    predictions: &Path,
    references: Option<&Path>,
    metrics: &[Metric],
    params: &MetricParams,
) -> Result<Vec<(Metric, f64)>> {
    let ctx = || format!("scoring {}", predictions.display());
    match references {
        Some(refs) => {
            let cands = read_token_file(predictions).with_context(ctx)?;
            let refs =
                read_token_file(refs).with_context(|| format!("reading {}", refs.display()))?;
            let pairs = align(&cands, &refs).with_context(ctx)?;
            metrics
                .iter()
                .map(|&m| Ok((m, corpus_score(&pairs, m, params).with_context(ctx)?.value)))
                .collect()
        }
        None => {
            let ranks =
                rank_list(&read_rank_file(predictions).with_context(ctx)?).with_context(ctx)?;
            Ok(vec![(
                Metric::Mrr,
                corpus_mrr(&ranks).with_context(ctx)?.value,
            )])
        }
    }
}

fn metrics(a: MetricsArgs) -> Result<ExitCode> {
    let params = metric_params(a.corpus_bleu);
    let (file, refs, metrics) = match (&a.candidates, &a.ranks) {
        (Some(c), None) => (c, a.references.as_deref(), text_metrics(&a.metric)?),
        (None, Some(r)) => (r, None, vec![Metric::Mrr]),
        _ => bail!(UsageError(
            "pass --candidates with --references, or --ranks".into()
        )),
    };
    let variant = a
        .variant
        .as_deref()
        .map(|v| usage(serde_json::from_value::<Variant>(json!(v))))
        .transpose()?;
    let scores = score_file(file, refs, &metrics, &params)?;
    let mut out = String::new();
    for (m, value) in scores {
        match (&a.scope, variant) {
            (Some(scope), Some(variant)) => {
                let entry = ScoreEntry {
                    scope: scope.clone(),
                    metric: m.name().to_string(),
                    variant,
                    value,
                };
                out.push_str(&serde_json::to_string(&entry)?);
                out.push('\n');
            }
            _ => out.push_str(&format!("{}\t{}\t{value}\n", m.name(), m.render(value))),
        }
    }
    write_output(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn read_scores(path: &Path) -> Result<Vec<ScoreEntry>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .with_context(|| format!("{}: line {}: bad score entry", path.display(), i + 1))
        })
        .collect()
}

fn prediction_ids(path: &Path, rank_file: bool) -> Result<BTreeSet<String>> {
    Ok(if rank_file {
        read_rank_file(path)?.into_iter().map(|r| r.id).collect()
    } else {
        read_token_file(path)?.into_iter().map(|r| r.id).collect()
    })
}

/// Both variants must score the same instances.
fn check_same_ids(original: &Path, transformed: &Path, rank_file: bool) -> Result<()> {
    let a = prediction_ids(original, rank_file)?;
    let b = prediction_ids(transformed, rank_file)?;
    let missing: Vec<String> = a.symmetric_difference(&b).cloned().collect();
    if missing.is_empty() {
        return Ok(());
    }
    Err(Error::IdMismatch(missing)).with_context(|| {
        format!(
            "{} and {} cover different instances",
            original.display(),
            transformed.display()
        )
    })
}

fn report(a: ReportArgs) -> Result<ExitCode> {
    let task: Task = usage(a.task.parse())?;
    let language = parse_language(&a.language)?;
    let format: Format = usage(a.format.parse())?;
    let mode: TallMode = usage(a.tall_mode.parse())?;

    let report = if !a.scores.is_empty() {
        let runs = a
            .scores
            .iter()
            .map(|p| {
                let pairs = pairs_from_scores(&read_scores(p)?)
                    .with_context(|| format!("pairing scores in {}", p.display()))?;
                Ok(build_report(task, language, &pairs, mode)?)
            })
            .collect::<Result<Vec<_>>>()?;
        average_runs(&runs)?
    } else {
        if a.scope.is_empty()
            || a.scope.len() != a.original.len()
            || a.scope.len() != a.transformed.len()
        {
            bail!(UsageError(
                "give --scores, or the same number of --scope, --original and --transformed".into()
            ));
        }
        let metrics = match a.references {
            Some(_) => text_metrics(&a.metric)?,
            None => vec![Metric::Mrr],
        };
        let params = metric_params(a.corpus_bleu);
        let mut pairs = Vec::new();
        for ((scope, orig), trans) in a.scope.iter().zip(&a.original).zip(&a.transformed) {
            check_same_ids(orig, trans, a.references.is_none())?;
            let before = score_file(orig, a.references.as_deref(), &metrics, &params)?;
            let after = score_file(trans, a.references.as_deref(), &metrics, &params)?;
            for ((m, b), (_, t)) in before.into_iter().zip(after) {
                pairs.push((scope.clone(), EvalPair::new(m.name(), b, t)));
            }
        }
        build_report(task, language, &pairs, mode)?
    };
    write_output(a.out.as_deref(), &render(&report, format)?)?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn language_from_extension_or_flag() {
        assert_eq!(
            language_for(Path::new("a.java"), None).unwrap(),
            Language::Java
        );
        assert_eq!(
            language_for(Path::new("a.py"), None).unwrap(),
            Language::Python
        );
        assert_eq!(
            language_for(Path::new("a.txt"), Some("py")).unwrap(),
            Language::Python
        );
        let err = language_for(Path::new("a.txt"), None).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }

    #[test]
    fn bad_flag_values_are_usage_errors() {
        let t = TransformArgs {
            seed: 0,
            site_policy: "sometimes".into(),
            insert_location: "middle".into(),
            junk_template: None,
        };
        assert!(config(&t)
            .unwrap_err()
            .downcast_ref::<UsageError>()
            .is_some());
        let sel = Selector {
            strategy: Some("ZZ-1".into()),
            category: None,
        };
        assert!(target(&sel)
            .unwrap_err()
            .downcast_ref::<UsageError>()
            .is_some());
    }

    #[test]
    fn mrr_is_not_a_text_metric() {
        assert!(text_metrics(&["bleu".into(), "mrr".into()]).is_err());
        assert_eq!(
            text_metrics(&["rouge-l".into()]).unwrap(),
            vec![Metric::RougeL]
        );
    }
}
