use serde::{Deserialize, Serialize};

use super::{Language, Node, SyntaxTree};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: String,
}

/// Leaf tokens of a tree in depth-first order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSequence {
    pub tokens: Vec<Token>,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn into_texts(self) -> Vec<String> {
        self.tokens.into_iter().map(|t| t.text).collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenMode {
    /// Every leaf, comments included.
    #[default]
    All,
    /// Comments dropped.
    CodeOnly,
}

/// String literals are emitted as one token even though the grammar splits
/// them into delimiters, fragments and escapes.
fn is_atomic(language: Language, kind: &str) -> bool {
    match language {
        Language::Java => matches!(kind, "string_literal" | "character_literal"),
        Language::Python => kind == "string",
    }
}

pub fn tokens_dfs(tree: &SyntaxTree) -> TokenSequence {
    tokens_dfs_with(tree, TokenMode::All)
}

pub fn tokens_dfs_with(tree: &SyntaxTree, mode: TokenMode) -> TokenSequence {
    let mut tokens = Vec::new();
    collect(tree.root(), tree.language(), mode, &mut tokens);
    TokenSequence { tokens }
}

fn collect(node: Node<'_>, language: Language, mode: TokenMode, out: &mut Vec<Token>) {
    if mode == TokenMode::CodeOnly && node.is_comment() {
        return;
    }
    if node.is_leaf() || is_atomic(language, node.kind()) {
        if node.start() < node.end() {
            out.push(Token {
                text: node.text().to_string(),
                kind: node.kind().to_string(),
            });
        }
        return;
    }
    for child in node.children() {
        collect(child, language, mode, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_text;

    fn texts(lang: Language, src: &str, mode: TokenMode) -> Vec<String> {
        tokens_dfs_with(&parse_text(lang, src).unwrap(), mode).into_texts()
    }

    #[test]
    fn python_assignment_tokens() {
        assert_eq!(
            texts(Language::Python, "x = 1", TokenMode::All),
            ["x", "=", "1"]
        );
    }

    #[test]
    fn java_if_tokens_start_with_header() {
        let toks = texts(
            Language::Java,
            "class A { void m() { if (a) b(); } }",
            TokenMode::All,
        );
        let pos = toks.iter().position(|t| t == "if").unwrap();
        assert_eq!(&toks[pos..pos + 4], ["if", "(", "a", ")"]);
    }

    #[test]
    fn empty_bodies_keep_structural_tokens() {
        assert_eq!(
            texts(Language::Java, "void f() {}", TokenMode::All),
            ["void", "f", "(", ")", "{", "}"]
        );
        assert_eq!(
            texts(Language::Python, "def f():\n    pass\n", TokenMode::All),
            ["def", "f", "(", ")", ":", "pass"]
        );
    }

    #[test]
    fn strings_are_single_tokens() {
        assert_eq!(
            texts(Language::Python, "s = 'a b\\n'", TokenMode::All),
            ["s", "=", "'a b\\n'"]
        );
        assert_eq!(
            texts(Language::Java, "String s = \"a b\\n\";", TokenMode::All),
            ["String", "s", "=", "\"a b\\n\"", ";"]
        );
    }

    #[test]
    fn code_only_drops_comments() {
        let src = "x = 1  # note\n";
        assert_eq!(
            texts(Language::Python, src, TokenMode::All),
            ["x", "=", "1", "# note"]
        );
        assert_eq!(
            texts(Language::Python, src, TokenMode::CodeOnly),
            ["x", "=", "1"]
        );
    }
}
