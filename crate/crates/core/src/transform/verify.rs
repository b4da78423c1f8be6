use std::io::Write;
use std::process::Command;

use serde::{Deserialize, Serialize};

use super::TransformOutcome;
use crate::metrics::lcs_pairs;
use crate::syntax::{
    has_errors, parse, parse_text, tokens_dfs_with, Language, SourceSnippet, TokenMode,
};

/// Token-level summary of a rewrite. Within each diff hunk, paired tokens
/// count as changed and the surplus on either side as added or removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDelta {
    pub added: usize,
    pub removed: usize,
    pub changed: usize,
}

impl TokenDelta {
    pub fn is_zero(&self) -> bool {
        *self == TokenDelta::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub parse_valid: bool,
    pub token_delta: TokenDelta,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions<'a> {
    pub token_mode: TokenMode,
    pub verify_cmd: Option<&'a str>,
}

/// Diff of two token sequences.
pub fn token_delta<S: AsRef<str>>(before: &[S], after: &[S]) -> TokenDelta {
    let a: Vec<&str> = before.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = after.iter().map(AsRef::as_ref).collect();
    let prefix = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let suffix = a[prefix..]
        .iter()
        .rev()
        .zip(b[prefix..].iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let a = &a[prefix..a.len() - suffix];
    let b = &b[prefix..b.len() - suffix];
    let mut delta = TokenDelta::default();
    let mut hunk = |d: usize, i: usize| {
        let paired = d.min(i);
        delta.changed += paired;
        delta.removed += d - paired;
        delta.added += i - paired;
    };
    let (mut pa, mut pb) = (0, 0);
    for (i, j) in lcs_pairs(a, b) {
        hunk(i - pa, j - pb);
        pa = i + 1;
        pb = j + 1;
    }
    hunk(a.len() - pa, b.len() - pb);
    delta
}

pub fn verify_preservation(
    original: &SourceSnippet,
    outcome: &TransformOutcome,
) -> VerificationReport {
    verify_preservation_with(original, outcome, &VerifyOptions::default())
}

pub fn verify_preservation_with(
    original: &SourceSnippet,
    outcome: &TransformOutcome,
    options: &VerifyOptions<'_>,
) -> VerificationReport {
    let mut notes = Vec::new();
    let Some(new_text) = outcome.new_text.as_deref() else {
        notes.push("outcome was not applied; nothing to verify".into());
        return VerificationReport {
            parse_valid: false,
            token_delta: TokenDelta::default(),
            notes,
        };
    };
    let new_tree = match parse_text(original.language, new_text) {
        Ok(t) => t,
        Err(e) => {
            notes.push(format!("re-parse failed: {e}"));
            return VerificationReport {
                parse_valid: false,
                token_delta: TokenDelta::default(),
                notes,
            };
        }
    };
    let parse_valid = !has_errors(&new_tree);
    if !parse_valid {
        notes.push("transformed text contains error or missing nodes".into());
    }
    let token_delta = match parse(original) {
        Ok(old_tree) => {
            let before = tokens_dfs_with(&old_tree, options.token_mode).into_texts();
            let after = tokens_dfs_with(&new_tree, options.token_mode).into_texts();
            token_delta(&before, &after)
        }
        Err(e) => {
            notes.push(format!("original failed to parse: {e}"));
            TokenDelta::default()
        }
    };
    if let Some(cmd) = options.verify_cmd {
        notes.push(run_external(cmd, original.language, new_text));
    }
    VerificationReport {
        parse_valid,
        token_delta,
        notes,
    }
}

fn run_external(template: &str, language: Language, text: &str) -> String {
    let suffix = match language {
        Language::Java => ".java",
        Language::Python => ".py",
    };
    let file = tempfile::Builder::new()
        .prefix("codemorph-")
        .suffix(suffix)
        .tempfile()
        .and_then(|mut f| f.write_all(text.as_bytes()).map(|_| f));
    let file = match file {
        Ok(f) => f,
        Err(e) => return format!("verify_cmd: could not write temp file: {e}"),
    };
    let path = file.path().display().to_string();
    let command = if template.contains("{}") {
        template.replace("{}", &path)
    } else {
        format!("{template} {path}")
    };
    match Command::new("sh").arg("-c").arg(&command).output() {
        Ok(out) if out.status.success() => "verify_cmd: pass (exit 0)".into(),
        Ok(out) => format!(
            "verify_cmd: fail (exit {}): {}",
            out.status.code().map_or("signal".into(), |c| c.to_string()),
            String::from_utf8_lossy(&out.stderr).trim()
        ),
        Err(e) => format!("verify_cmd: could not run `{command}`: {e}"),
    }
}
