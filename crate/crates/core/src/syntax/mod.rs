//! Parsing, byte-range editing and token serialization for Java and Python.
//!
//! Trees are built with tree-sitter and copied into an owned arena so they can
//! be shared across threads and outlive the parser that produced them.

mod edit;
mod grammar;
mod tokens;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use edit::spans_conflict;
pub use edit::{apply_edits, Edit, EditSet};
pub use grammar::{grammar, GRAMMAR_DIR_ENV};
pub use tokens::{tokens_dfs, tokens_dfs_with, Token, TokenMode, TokenSequence};
pub use tree::{has_errors, parse, parse_text, Descendants, Node, NodeId, SyntaxTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::Java, Language::Python];

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }

    /// Node kinds that are comments in this language's grammar.
    pub fn is_comment_kind(self, kind: &str) -> bool {
        match self {
            Language::Java => kind == "line_comment" || kind == "block_comment",
            Language::Python => kind == "comment",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Java => "Java",
            Language::Python => "Python",
        })
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" | "py" => Ok(Language::Python),
            _ => Err(Error::UnsupportedLanguage(s.to_string())),
        }
    }
}

/// One unit of code flowing through parse -> transform -> render.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSnippet {
    pub id: String,
    pub language: Language,
    pub text: String,
}

impl SourceSnippet {
    pub fn new(id: impl Into<String>, language: Language, text: impl Into<String>) -> Self {
        SourceSnippet {
            id: id.into(),
            language,
            text: text.into(),
        }
    }

    /// Builds a snippet from raw bytes, rejecting text that is not UTF-8.
    pub fn from_bytes(id: impl Into<String>, language: Language, bytes: Vec<u8>) -> Result<Self> {
        let text = String::from_utf8(bytes).map_err(|e| Error::InvalidEncoding {
            offset: e.utf8_error().valid_up_to(),
        })?;
        Ok(SourceSnippet::new(id, language, text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn language_parsing_rejects_unknown_tags() {
        assert_eq!("Java".parse::<Language>().unwrap(), Language::Java);
        assert_eq!("python".parse::<Language>().unwrap(), Language::Python);
        assert!(matches!(
            "rust".parse::<Language>(),
            Err(Error::UnsupportedLanguage(_))
        ));
    }

    #[test]
    fn invalid_utf8_is_rejected() {
        let err =
            SourceSnippet::from_bytes("a", Language::Python, vec![b'x', 0xff, b'y']).unwrap_err();
        assert!(matches!(err, Error::InvalidEncoding { offset: 1 }));
    }
}
