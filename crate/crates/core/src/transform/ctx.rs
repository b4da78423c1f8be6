use std::collections::HashSet;
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TransformConfig;
use crate::syntax::{Edit, Language, Node, SourceSnippet, SyntaxTree};

/// One place a strategy can rewrite, with the edits that do it.
#[derive(Debug, Clone)]
pub(crate) struct Site {
    pub anchor: Range<usize>,
    pub edits: Vec<Edit>,
}

impl Site {
    pub fn new(anchor: Range<usize>, edits: Vec<Edit>) -> Self {
        Site { anchor, edits }
    }

    pub fn at(node: Node<'_>, edits: Vec<Edit>) -> Self {
        Site::new(node.span(), edits)
    }
}

/// Candidate sites for one strategy on one snippet. `shared` edits (such as
/// an injected import) are applied once whenever any site is chosen.
#[derive(Debug, Clone, Default)]
pub(crate) struct Candidates {
    pub sites: Vec<Site>,
    pub shared: Vec<Edit>,
    reason: String,
}

impl Candidates {
    pub fn new(sites: Vec<Site>, reason: impl Into<String>) -> Self {
        Candidates {
            sites,
            shared: Vec::new(),
            reason: reason.into(),
        }
    }

    pub fn none(reason: impl Into<String>) -> Self {
        Candidates::new(Vec::new(), reason)
    }

    pub fn with_shared(mut self, shared: Vec<Edit>) -> Self {
        self.shared = shared;
        self
    }

    pub fn reason_if_empty(&self) -> Option<String> {
        self.sites.is_empty().then(|| self.reason.clone())
    }
}

/// FNV-1a, used to derive per-strategy seeds that are stable across builds.
fn stable_hash(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for b in part.bytes().chain([0xff]) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub(crate) fn seeded_rng(seed: u64, strategy_id: &str, purpose: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stable_hash(&[strategy_id, purpose]))
}

pub(crate) struct Ctx<'a> {
    pub snippet: &'a SourceSnippet,
    pub tree: &'a SyntaxTree,
    pub config: &'a TransformConfig,
    pub strategy_id: &'static str,
    names: HashSet<&'a str>,
}

impl<'a> Ctx<'a> {
    pub fn new(
        snippet: &'a SourceSnippet,
        tree: &'a SyntaxTree,
        config: &'a TransformConfig,
        strategy_id: &'static str,
    ) -> Self {
        let names = tree
            .nodes()
            .filter(|n| n.is_leaf() && n.is_named())
            .map(|n| n.text())
            .collect();
        Ctx {
            snippet,
            tree,
            config,
            strategy_id,
            names,
        }
    }

    pub fn lang(&self) -> Language {
        self.snippet.language
    }

    pub fn is_java(&self) -> bool {
        self.lang() == Language::Java
    }

    pub fn src(&self) -> &'a str {
        self.tree.source()
    }

    pub fn root(&self) -> Node<'a> {
        self.tree.root()
    }

    pub fn text(&self, span: Range<usize>) -> &'a str {
        self.tree.text(span)
    }

    /// All nodes of the given kinds, in document order.
    pub fn nodes_of(&self, kinds: &[&str]) -> Vec<Node<'a>> {
        self.tree
            .nodes()
            .filter(|n| kinds.contains(&n.kind()))
            .collect()
    }

    pub fn rng(&self, purpose: &str) -> ChaCha8Rng {
        seeded_rng(self.config.seed, self.strategy_id, purpose)
    }

    /// True if `name` occurs as any identifier-like leaf of the snippet.
    pub fn name_taken(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    /// `base` if unused, else `base1`, `base2`, ... skipping `avoid`.
    pub fn fresh_name(&self, base: &str, avoid: &HashSet<String>) -> String {
        if !self.name_taken(base) && !avoid.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|n| !self.name_taken(n) && !avoid.contains(n))
            .expect("unbounded search")
    }

    pub fn indent_of(&self, node: Node<'_>) -> &'a str {
        self.tree.indent_at(node.start())
    }

    pub fn starts_line(&self, node: Node<'_>) -> bool {
        self.tree.starts_line(node.start())
    }

    /// True when nothing but whitespace (or a comment) follows `node` on its
    /// last line.
    pub fn ends_line(&self, node: Node<'_>) -> bool {
        let rest = &self.src()[node.end()..self.tree.line_end(node.end())];
        let rest = rest.trim_start();
        rest.is_empty() || rest.starts_with("//") || rest.starts_with('#')
    }

    /// One indentation step, guessed from the snippet (defaults to four spaces).
    pub fn indent_unit(&self) -> String {
        let mut best: Option<&str> = None;
        for line in self.src().lines() {
            let ws = &line[..line.len() - line.trim_start_matches([' ', '\t']).len()];
            if ws.is_empty() || line.trim().is_empty() {
                continue;
            }
            if ws.starts_with('\t') {
                return "\t".into();
            }
            if best.is_none_or(|b| ws.len() < b.len()) {
                best = Some(ws);
            }
        }
        match best {
            Some(b) if b.len() <= 8 => b.to_string(),
            _ => "    ".into(),
        }
    }

    /// Edit inserting `code` as a new statement directly before `stmt`,
    /// on its own line at the statement's indentation when `stmt` starts a
    /// line, otherwise inline.
    pub fn insert_before(&self, stmt: Node<'_>, code: &str) -> Edit {
        if self.starts_line(stmt) {
            let indent = self.indent_of(stmt);
            let lines: String = code.lines().map(|l| format!("{indent}{l}\n")).collect();
            Edit::insert(self.tree.line_start(stmt.start()), lines)
        } else {
            Edit::insert(stmt.start(), format!("{code} "))
        }
    }

    /// Edit inserting `code` as a new statement directly after `stmt`.
    pub fn insert_after(&self, stmt: Node<'_>, code: &str) -> Edit {
        if self.starts_line(stmt) && self.ends_line(stmt) {
            let indent = self.indent_of(stmt);
            let at = self.tree.line_end(stmt.end());
            let lines: String = code.lines().map(|l| format!("\n{indent}{l}")).collect();
            Edit::insert(at, lines)
        } else {
            Edit::insert(stmt.end(), format!(" {code}"))
        }
    }

    /// Re-indents every line of `text` after the first by `delta` columns
    /// relative to `from` indentation, replacing the prefix `from` with `to`.
    pub fn reindent(&self, text: &str, from: &str, to: &str) -> String {
        let mut out = String::with_capacity(text.len());
        for (i, line) in text.split('\n').enumerate() {
            if i > 0 {
                out.push('\n');
                if let Some(rest) = line.strip_prefix(from) {
                    out.push_str(to);
                    out.push_str(rest);
                    continue;
                }
            }
            out.push_str(line);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            stable_hash(&["GS-7", "site"]),
            stable_hash(&["GS-7", "site"])
        );
        assert_ne!(
            stable_hash(&["GS-7", "site"]),
            stable_hash(&["GS-6", "site"])
        );
        assert_ne!(stable_hash(&["ab", "c"]), stable_hash(&["a", "bc"]));
    }
}
