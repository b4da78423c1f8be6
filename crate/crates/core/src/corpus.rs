//! JSONL corpora: loading, writing, applicability filtering and the
//! task-specific preprocessing applied before evaluation.
//!
//! A corpus line needs `code` and `language`. `id` defaults to the 1-based
//! line number, `docstring` (or `summary`) becomes the reference summary and
//! any other key is kept verbatim in `meta`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::syntax::{parse, tokens_dfs, Language, SourceSnippet, Token, TokenSequence};
use crate::transform::{is_applicable, Category, Strategy, TransformConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub language: Language,
    pub code: String,
    #[serde(rename = "docstring", default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub meta: Map<String, Value>,
}

impl CorpusRecord {
    pub fn new(id: impl Into<String>, language: Language, code: impl Into<String>) -> Self {
        CorpusRecord {
            id: id.into(),
            language,
            code: code.into(),
            summary: None,
            meta: Map::new(),
        }
    }

    pub fn snippet(&self) -> SourceSnippet {
        SourceSnippet::new(self.id.clone(), self.language, self.code.clone())
    }

    fn from_value(value: Value, line: usize) -> std::result::Result<Self, String> {
        let Value::Object(mut obj) = value else {
            return Err("expected a JSON object".into());
        };
        let code = match obj.remove("code") {
            Some(Value::String(s)) if !s.is_empty() => s,
            Some(Value::String(_)) => return Err("`code` is empty".into()),
            Some(_) => return Err("`code` must be a string".into()),
            None => return Err("missing `code`".into()),
        };
        let language = match obj.remove("language") {
            Some(Value::String(s)) => s.parse::<Language>().map_err(|e| e.to_string())?,
            Some(_) => return Err("`language` must be a string".into()),
            None => return Err("missing `language`".into()),
        };
        let id = match obj.remove("id") {
            Some(Value::String(s)) => s,
            Some(Value::Number(n)) => n.to_string(),
            Some(_) => return Err("`id` must be a string or number".into()),
            None => line.to_string(),
        };
        let summary = match obj.remove("docstring").or_else(|| obj.remove("summary")) {
            Some(Value::String(s)) => Some(s),
            Some(Value::Null) | None => None,
            Some(_) => return Err("`docstring` must be a string".into()),
        };
        let mut meta = match obj.remove("meta") {
            Some(Value::Object(m)) => m,
            Some(Value::Null) | None => Map::new(),
            Some(_) => return Err("`meta` must be an object".into()),
        };
        meta.extend(obj);
        Ok(CorpusRecord {
            id,
            language,
            code,
            summary,
            meta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionKind {
    Text,
    Rank,
}

/// A model output for one corpus record: a generated summary or the rank
/// of the true target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub kind: PredictionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
}

impl PredictionRecord {
    pub fn text(id: impl Into<String>, text: impl Into<String>) -> Self {
        PredictionRecord {
            id: id.into(),
            kind: PredictionKind::Text,
            text: Some(text.into()),
            rank: None,
        }
    }

    pub fn rank(id: impl Into<String>, rank: u64) -> Self {
        PredictionRecord {
            id: id.into(),
            kind: PredictionKind::Rank,
            text: None,
            rank: Some(rank),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match (self.kind, &self.text, self.rank) {
            (PredictionKind::Text, Some(_), None) => Ok(()),
            (PredictionKind::Rank, None, Some(r)) if r >= 1 => Ok(()),
            (PredictionKind::Rank, None, Some(r)) => Err(format!("rank must be >= 1 (got {r})")),
            (PredictionKind::Text, ..) => Err("text prediction needs `text` and no `rank`".into()),
            (PredictionKind::Rank, ..) => Err("rank prediction needs `rank` and no `text`".into()),
        }
    }
}

/// A line that was skipped in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedLine {
    pub line: usize,
    pub detail: String,
}

/// Streams records from a JSONL corpus in file order.
pub struct CorpusReader {
    path: PathBuf,
    lines: std::io::Lines<BufReader<File>>,
    line_no: usize,
    strict: bool,
    seen: HashSet<String>,
    skipped: Vec<SkippedLine>,
}

impl CorpusReader {
    pub fn open(path: impl AsRef<Path>, strict: bool) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        Ok(CorpusReader {
            path,
            lines: BufReader::new(file).lines(),
            line_no: 0,
            strict,
            seen: HashSet::new(),
            skipped: Vec::new(),
        })
    }

    /// Lines skipped so far (always empty in strict mode).
    pub fn skipped(&self) -> &[SkippedLine] {
        &self.skipped
    }

    fn parse_line(&mut self, text: &str) -> std::result::Result<CorpusRecord, String> {
        let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let record = CorpusRecord::from_value(value, self.line_no)?;
        if !self.seen.insert(record.id.clone()) {
            return Err(format!("duplicate id `{}`", record.id));
        }
        Ok(record)
    }
}

impl Iterator for CorpusReader {
    type Item = Result<CorpusRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::io(&self.path, e))),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            match self.parse_line(&line) {
                Ok(r) => return Some(Ok(r)),
                Err(detail) if self.strict => {
                    return Some(Err(Error::MalformedLine {
                        path: self.path.clone(),
                        line: self.line_no,
                        detail,
                    }))
                }
                Err(detail) => {
                    log::warn!(
                        "{}: line {}: {detail}; skipped",
                        self.path.display(),
                        self.line_no
                    );
                    self.skipped.push(SkippedLine {
                        line: self.line_no,
                        detail,
                    });
                }
            }
        }
    }
}

/// Reads a whole corpus. In lenient mode malformed lines are logged and
/// skipped; in strict mode the first one is an error.
pub fn load_corpus(path: impl AsRef<Path>, strict: bool) -> Result<Vec<CorpusRecord>> {
    CorpusReader::open(path, strict)?.collect()
}

/// Writes one JSON object per line and returns the number of records.
pub fn write_corpus<'a, I>(records: I, path: impl AsRef<Path>) -> Result<usize>
where
    I: IntoIterator<Item = &'a CorpusRecord>,
{
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let n = write_jsonl(records, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))?;
    Ok(n)
}

/// Serializes records as JSONL into any writer.
pub fn write_jsonl<'a, I, W>(records: I, out: &mut W) -> std::io::Result<usize>
where
    I: IntoIterator<Item = &'a CorpusRecord>,
    W: Write,
{
    let mut n = 0;
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
        n += 1;
    }
    Ok(n)
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |detail: String| Error::MalformedLine {
            path: path.to_path_buf(),
            line: i + 1,
            detail,
        };
        let rec: PredictionRecord =
            serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        rec.validate().map_err(malformed)?;
        out.push(rec);
    }
    Ok(out)
}

/// What [`filter_transformable`] checks applicability against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Strategy(&'static Strategy),
    Category(Category),
}

impl Target {
    /// Strategies of the target that are defined for `language`.
    pub fn eligible(self, language: Language) -> Vec<&'static Strategy> {
        let all: Vec<&'static Strategy> = match self {
            Target::Strategy(s) => vec![s],
            Target::Category(c) => c.strategies().collect(),
        };
        all.into_iter().filter(|s| s.supports(language)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterStats {
    pub total: usize,
    pub kept: usize,
    /// Records that did not parse cleanly, or were in another language.
    pub parse_errors: usize,
    pub language_mismatch: usize,
    /// Records on which each eligible strategy is applicable.
    pub per_strategy: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct FilterResult {
    pub kept: Vec<CorpusRecord>,
    pub stats: FilterStats,
}

enum Verdict {
    Applicable(Vec<&'static str>),
    Mismatch,
    ParseError,
}

/// Keeps the records on which at least one eligible strategy applies.
pub fn filter_transformable(
    records: Vec<CorpusRecord>,
    target: Target,
    language: Language,
    config: &TransformConfig,
) -> FilterResult {
    let eligible = target.eligible(language);
    let verdicts: Vec<Verdict> = records
        .par_iter()
        .map(|r| {
            if r.language != language {
                return Verdict::Mismatch;
            }
            let snippet = r.snippet();
            let mut hits = Vec::new();
            for s in &eligible {
                match is_applicable(s, &snippet, config) {
                    Ok(a) if a.applicable => hits.push(s.id),
                    Ok(_) => {}
                    Err(_) => return Verdict::ParseError,
                }
            }
            Verdict::Applicable(hits)
        })
        .collect();

    let mut stats = FilterStats {
        total: records.len(),
        per_strategy: eligible.iter().map(|s| (s.id.to_string(), 0)).collect(),
        ..FilterStats::default()
    };
    let mut kept = Vec::new();
    for (r, v) in records.into_iter().zip(verdicts) {
        match v {
            Verdict::Mismatch => stats.language_mismatch += 1,
            Verdict::ParseError => stats.parse_errors += 1,
            Verdict::Applicable(hits) => {
                for id in &hits {
                    *stats.per_strategy.entry(id.to_string()).or_default() += 1;
                }
                if !hits.is_empty() {
                    kept.push(r);
                }
            }
        }
    }
    stats.kept = kept.len();
    FilterResult { kept, stats }
}

/// Partitions a token sequence into consecutive chunks of at most `max_len`.
pub fn chunk_tokens<T: Clone>(tokens: &[T], max_len: usize) -> Vec<Vec<T>> {
    let max_len = max_len.max(1);
    if tokens.is_empty() {
        return vec![Vec::new()];
    }
    tokens.chunks(max_len).map(<[T]>::to_vec).collect()
}

/// Splits a record whose DFS token sequence exceeds `max_len`. Each chunk
/// becomes a record with id suffix `#k` (from 0) whose code is its tokens
/// joined by single spaces. Short records come back unchanged.
pub fn split_long(record: &CorpusRecord, max_len: usize) -> Result<Vec<CorpusRecord>> {
    if max_len == 0 {
        return Err(Error::InvalidParams("max_len must be >= 1".into()));
    }
    let tokens = tokens_dfs(&parse(&record.snippet())?).into_texts();
    if tokens.len() <= max_len {
        return Ok(vec![record.clone()]);
    }
    Ok(chunk_tokens(&tokens, max_len)
        .into_iter()
        .enumerate()
        .map(|(k, chunk)| {
            let mut r = record.clone();
            r.id = format!("{}#{k}", record.id);
            r.code = chunk.join(" ");
            r.meta.insert("tokens".into(), Value::from(chunk.len()));
            r
        })
        .collect())
}

const SYMBOL_TABLE_TSV: &str = include_str!("../resources/symbol_names.tsv");

/// English names for operator and punctuation tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolNameTable {
    names: HashMap<String, String>,
}

impl SymbolNameTable {
    /// The table shipped in `resources/symbol_names.tsv`.
    pub fn builtin() -> Self {
        Self::from_tsv(SYMBOL_TABLE_TSV).expect("bundled symbol table is well formed")
    }

    /// Parses `symbol<TAB>name` lines; `#` starts a comment line.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut names = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (sym, name) = line.split_once('\t').ok_or_else(|| Error::MalformedLine {
                path: PathBuf::from("symbol_names.tsv"),
                line: i + 1,
                detail: "expected `symbol<TAB>name`".into(),
            })?;
            names.insert(sym.to_string(), name.trim().to_string());
        }
        Ok(SymbolNameTable { names })
    }

    pub fn get(&self, symbol: &str) -> Option<&str> {
        self.names.get(symbol).map(String::as_str)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.names.contains_key(symbol)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.names.keys().map(String::as_str)
    }
}

/// Drops non-ASCII tokens and renames symbols. Idempotent.
pub fn preprocess_tokens(tokens: TokenSequence, table: &SymbolNameTable) -> TokenSequence {
    let tokens = tokens
        .tokens
        .into_iter()
        .filter(|t| t.text.is_ascii())
        .map(|t| match table.get(&t.text) {
            Some(name) => Token {
                text: name.to_string(),
                kind: t.kind,
            },
            None => t,
        })
        .collect();
    TokenSequence { tokens }
}

/// DFS tokens of the record prepared for code search. Sub-tokens are not
/// split.
pub fn preprocess_for_search(
    record: &CorpusRecord,
    table: &SymbolNameTable,
) -> Result<TokenSequence> {
    let tree = parse(&record.snippet())?;
    Ok(preprocess_tokens(tokens_dfs(&tree), table))
}
