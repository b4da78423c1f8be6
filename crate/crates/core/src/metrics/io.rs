//! Readers for token files (candidates, references) and rank files.
//!
//! Token files are either JSONL with `"id"` and `"tokens"` (array of strings or
//! a whitespace-separated string) or plain text with one whitespace-tokenized
//! instance per line, in which case ids are the 0-based line numbers.
//! Rank files are JSONL with `"id"` and `"rank"`, or one integer per line.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RankList;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub id: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub id: String,
    pub rank: u64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn malformed(path: &Path, line: usize, detail: impl Into<String>) -> Error {
    Error::MalformedLine {
        path: path.to_path_buf(),
        line,
        detail: detail.into(),
    }
}

fn id_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn is_jsonl(text: &str) -> bool {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.trim_start().starts_with('{'))
}

pub fn parse_token_file(path: &Path, text: &str) -> Result<Vec<TokenRecord>> {
    if !is_jsonl(text) {
        return Ok(text
            .lines()
            .enumerate()
            .map(|(i, l)| TokenRecord {
                id: i.to_string(),
                tokens: l.split_whitespace().map(str::to_owned).collect(),
            })
            .collect());
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value =
            serde_json::from_str(line).map_err(|e| malformed(path, i + 1, e.to_string()))?;
        let id = v
            .get("id")
            .and_then(id_of)
            .ok_or_else(|| malformed(path, i + 1, "missing \"id\""))?;
        let tokens = match v.get("tokens") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|t| t.as_str().map(str::to_owned))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| malformed(path, i + 1, "\"tokens\" must hold strings"))?,
            Some(Value::String(s)) => s.split_whitespace().map(str::to_owned).collect(),
            _ => return Err(malformed(path, i + 1, "missing \"tokens\"")),
        };
        out.push(TokenRecord { id, tokens });
    }
    Ok(out)
}

pub fn read_token_file(path: &Path) -> Result<Vec<TokenRecord>> {
    parse_token_file(path, &read(path)?)
}

pub fn parse_rank_file(path: &Path, text: &str) -> Result<Vec<RankRecord>> {
    let json = is_jsonl(text);
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (id, rank) = if json {
            let v: Value =
                serde_json::from_str(trimmed).map_err(|e| malformed(path, i + 1, e.to_string()))?;
            let id = v
                .get("id")
                .and_then(id_of)
                .ok_or_else(|| malformed(path, i + 1, "missing \"id\""))?;
            let rank = v
                .get("rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| malformed(path, i + 1, "\"rank\" must be a positive integer"))?;
            (id, rank)
        } else {
            let rank = trimmed
                .parse::<u64>()
                .map_err(|e| malformed(path, i + 1, e.to_string()))?;
            (i.to_string(), rank)
        };
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        out.push(RankRecord { id, rank });
    }
    Ok(out)
}

pub fn read_rank_file(path: &Path) -> Result<Vec<RankRecord>> {
    parse_rank_file(path, &read(path)?)
}

pub fn rank_list(records: &[RankRecord]) -> Result<RankList> {
    RankList::new(records.iter().map(|r| r.rank).collect())
}

/// Pairs candidates with references by id, in candidate order. Every id must
/// be present in both files.
pub fn align(
    candidates: &[TokenRecord],
    references: &[TokenRecord],
) -> Result<Vec<(Vec<String>, Vec<String>)>> {
    let by_id: std::collections::HashMap<&str, &TokenRecord> =
        references.iter().map(|r| (r.id.as_str(), r)).collect();
    let missing: Vec<&str> = candidates
        .iter()
        .filter(|c| !by_id.contains_key(c.id.as_str()))
        .map(|c| c.id.as_str())
        .chain({
            let cand: std::collections::HashSet<&str> =
                candidates.iter().map(|c| c.id.as_str()).collect();
            references
                .iter()
                .filter(move |r| !cand.contains(r.id.as_str()))
                .map(|r| r.id.as_str())
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::IdMismatch(
            missing.iter().map(|s| s.to_string()).collect(),
        ));
    }
    Ok(candidates
        .iter()
        .map(|c| (c.tokens.clone(), by_id[c.id.as_str()].tokens.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_jsonl_tokens() {
        let p = Path::new("t");
        let plain = parse_token_file(p, "a b\n\nc\n").unwrap();
        assert_eq!(plain.len(), 3);
        assert_eq!(plain[0].tokens, vec!["a", "b"]);
        assert!(plain[1].tokens.is_empty());

        let json = "{\"id\":\"x\",\"tokens\":[\"a\",\"b\"]}\n{\"id\":2,\"tokens\":\"c d\"}\n";
        let recs = parse_token_file(p, json).unwrap();
        assert_eq!(recs[1].id, "2");
        assert_eq!(recs[1].tokens, vec!["c", "d"]);
        assert!(matches!(
            parse_token_file(p, "{\"id\":1}\n"),
            Err(Error::MalformedLine { line: 1, .. })
        ));
    }

    #[test]
    fn ranks() {
        let p = Path::new("r");
        let recs = parse_rank_file(p, "{\"id\":\"a\",\"rank\":2}\n").unwrap();
        assert_eq!(recs[0].rank, 2);
        assert_eq!(parse_rank_file(p, "1\n3\n").unwrap().len(), 2);
        assert!(matches!(
            parse_rank_file(p, "0\n"),
            Err(Error::InvalidRank(0))
        ));
    }

    #[test]
    fn alignment_reports_missing_ids() {
        let rec = |id: &str| TokenRecord {
            id: id.into(),
            tokens: vec![],
        };
        let err = align(&[rec("a"), rec("b")], &[rec("a"), rec("c")]).unwrap_err();
        match err {
            Error::IdMismatch(ids) => assert_eq!(ids, vec!["b", "c"]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
