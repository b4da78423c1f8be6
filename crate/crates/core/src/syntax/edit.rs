use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Replacement of a byte range of the original text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edit {
    pub span: Range<usize>,
    pub replacement: String,
}

impl Edit {
    pub fn replace(span: Range<usize>, replacement: impl Into<String>) -> Self {
        Edit {
            span,
            replacement: replacement.into(),
        }
    }

    pub fn insert(at: usize, text: impl Into<String>) -> Self {
        Edit::replace(at..at, text)
    }

    pub fn delete(span: Range<usize>) -> Self {
        Edit::replace(span, "")
    }

    pub fn is_insertion(&self) -> bool {
        self.span.is_empty()
    }
}

/// Ordered, non-overlapping edits against one original text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditSet {
    edits: Vec<Edit>,
}

/// Two spans conflict if they share a byte, or if both are insertions at the
/// same offset (their relative order would be ambiguous), or if an insertion
/// falls strictly inside a replaced range.
pub(crate) fn spans_conflict(a: &Range<usize>, b: &Range<usize>) -> bool {
    if a.is_empty() && b.is_empty() {
        return a.start == b.start;
    }
    if a.is_empty() {
        return b.start < a.start && a.start < b.end;
    }
    if b.is_empty() {
        return a.start < b.start && b.start < a.end;
    }
    a.start < b.end && b.start < a.end
}

impl EditSet {
    pub fn new() -> Self {
        EditSet::default()
    }

    /// Sorts `edits` by start and validates that none overlap.
    pub fn from_edits(mut edits: Vec<Edit>) -> Result<Self> {
        edits.sort_by(|a, b| (a.span.start, a.span.end).cmp(&(b.span.start, b.span.end)));
        for pair in edits.windows(2) {
            if spans_conflict(&pair[0].span, &pair[1].span) {
                return Err(Error::OverlappingEdits {
                    first: pair[0].span.clone(),
                    second: pair[1].span.clone(),
                });
            }
        }
        Ok(EditSet { edits })
    }

    pub fn edits(&self) -> &[Edit] {
        &self.edits
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    pub fn spans(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.edits.iter().map(|e| e.span.clone())
    }
}

/// Applies `edits` to `text`, right to left so earlier offsets stay valid.
pub fn apply_edits(text: &str, edits: &EditSet) -> Result<String> {
    for e in &edits.edits {
        if e.span.start > e.span.end || e.span.end > text.len() {
            return Err(Error::SpanOutOfBounds {
                span: e.span.clone(),
                len: text.len(),
            });
        }
        if !text.is_char_boundary(e.span.start) || !text.is_char_boundary(e.span.end) {
            return Err(Error::SpanOutOfBounds {
                span: e.span.clone(),
                len: text.len(),
            });
        }
    }
    // `EditSet` values are validated on construction, but a deserialized set
    // may not be.
    for pair in edits.edits.windows(2) {
        if pair[1].span.start < pair[0].span.start || spans_conflict(&pair[0].span, &pair[1].span) {
            return Err(Error::OverlappingEdits {
                first: pair[0].span.clone(),
                second: pair[1].span.clone(),
            });
        }
    }
    let mut out = text.to_string();
    for e in edits.edits.iter().rev() {
        out.replace_range(e.span.clone(), &e.replacement);
    }
    Ok(out)
}
