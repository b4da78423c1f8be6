use std::ops::Range;
use std::path::PathBuf;

use thiserror::Error;

use crate::syntax::Language;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported language `{0}` (expected `java` or `python`)")]
    UnsupportedLanguage(String),

    #[error("grammar for {language} could not be loaded: {detail}")]
    GrammarUnavailable { language: Language, detail: String },

    #[error("source text is not valid UTF-8 (first invalid byte at offset {offset})")]
    InvalidEncoding { offset: usize },

    #[error("edits overlap: {first:?} and {second:?}")]
    OverlappingEdits {
        first: Range<usize>,
        second: Range<usize>,
    },

    #[error("edit span {span:?} lies outside the text (length {len})")]
    SpanOutOfBounds { span: Range<usize>, len: usize },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("strategy {strategy} is not defined for {language}")]
    LanguageMismatch {
        strategy: &'static str,
        language: Language,
    },

    #[error("snippet `{id}` contains parse errors")]
    ParseErrors { id: String },

    #[error("strategy {strategy} produced unparsable output for `{id}`: {detail}")]
    InternalRenderError {
        strategy: &'static str,
        id: String,
        detail: String,
    },

    #[error("{path}: line {line}: {detail}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("invalid metric parameters: {0}")]
    InvalidParams(String),

    #[error("rank list is empty")]
    EmptyRankList,

    #[error("rank must be >= 1 (got {0})")]
    InvalidRank(u64),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("baseline score is zero; improvement is undefined")]
    ZeroBaseline,

    #[error("category {0} has no evaluated strategies")]
    EmptyCategory(String),

    #[error("reports differ in shape: {0}")]
    ShapeMismatch(String),

    #[error("ids present in only one input: {}", .0.join(", "))]
    IdMismatch(Vec<String>),

    #[error("unknown output format `{0}`")]
    UnknownFormat(String),

    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }
}
