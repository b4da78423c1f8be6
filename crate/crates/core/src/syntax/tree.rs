use std::cell::RefCell;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use super::{grammar, Language, SourceSnippet};
use crate::error::{Error, Result};

pub type NodeId = u32;

const FLAG_ERROR: u8 = 1;
const FLAG_MISSING: u8 = 2;
const FLAG_EXTRA: u8 = 4;

#[derive(Debug, Clone)]
struct NodeData {
    kind: &'static str,
    span: Range<usize>,
    named: bool,
    flags: u8,
    field: Option<&'static str>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// A concrete syntax tree whose nodes carry byte spans into the source text.
///
/// Every node lives in a flat arena; [`Node`] is a cheap copyable handle.
#[derive(Clone)]
pub struct SyntaxTree {
    language: Language,
    source: Arc<str>,
    nodes: Vec<NodeData>,
    line_starts: Vec<usize>,
}

thread_local! {
    static PARSERS: RefCell<[Option<tree_sitter::Parser>; 2]> = const { RefCell::new([None, None]) };
}

/// Parses a snippet into a concrete syntax tree.
///
/// Syntax errors do not fail the parse: error and missing nodes stay in the
/// tree and are reported by [`has_errors`].
pub fn parse(snippet: &SourceSnippet) -> Result<SyntaxTree> {
    parse_text(snippet.language, &snippet.text)
}

pub fn parse_text(language: Language, text: &str) -> Result<SyntaxTree> {
    let slot = match language {
        Language::Java => 0,
        Language::Python => 1,
    };
    let ts_tree = PARSERS.with(|cell| -> Result<tree_sitter::Tree> {
        let mut parsers = cell.borrow_mut();
        if parsers[slot].is_none() {
            let mut parser = tree_sitter::Parser::new();
            parser
                .set_language(&grammar(language)?)
                .map_err(|e| Error::GrammarUnavailable {
                    language,
                    detail: e.to_string(),
                })?;
            parsers[slot] = Some(parser);
        }
        let parser = parsers[slot].as_mut().expect("parser initialised above");
        parser.reset();
        parser
            .parse(text, None)
            .ok_or_else(|| Error::GrammarUnavailable {
                language,
                detail: "parser returned no tree".into(),
            })
    })?;
    Ok(SyntaxTree::from_ts(language, Arc::from(text), &ts_tree))
}

/// True iff any node is an error or missing node.
pub fn has_errors(tree: &SyntaxTree) -> bool {
    tree.nodes
        .iter()
        .any(|n| n.flags & (FLAG_ERROR | FLAG_MISSING) != 0)
}

impl SyntaxTree {
    fn from_ts(language: Language, source: Arc<str>, ts: &tree_sitter::Tree) -> Self {
        let mut nodes: Vec<NodeData> = Vec::new();
        let mut cursor = ts.walk();
        let mut stack: Vec<NodeId> = Vec::new();
        loop {
            let node = cursor.node();
            let mut flags = 0;
            if node.is_error() {
                flags |= FLAG_ERROR;
            }
            if node.is_missing() {
                flags |= FLAG_MISSING;
            }
            if node.is_extra() {
                flags |= FLAG_EXTRA;
            }
            let id = nodes.len() as NodeId;
            let parent = stack.last().copied();
            nodes.push(NodeData {
                kind: node.kind(),
                span: node.byte_range(),
                named: node.is_named(),
                flags,
                field: cursor.field_name(),
                parent,
                children: Vec::new(),
            });
            if let Some(p) = parent {
                nodes[p as usize].children.push(id);
            }
            if cursor.goto_first_child() {
                stack.push(id);
                continue;
            }
            loop {
                if cursor.goto_next_sibling() {
                    break;
                }
                if !cursor.goto_parent() {
                    let line_starts = line_starts(&source);
                    return SyntaxTree {
                        language,
                        source,
                        nodes,
                        line_starts,
                    };
                }
                stack.pop();
            }
        }
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> Node<'_> {
        Node { tree: self, id: 0 }
    }

    pub fn node(&self, id: NodeId) -> Node<'_> {
        assert!((id as usize) < self.nodes.len(), "node id out of range");
        Node { tree: self, id }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All nodes in depth-first pre-order.
    pub fn nodes(&self) -> impl Iterator<Item = Node<'_>> {
        (0..self.nodes.len() as NodeId).map(move |id| Node { tree: self, id })
    }

    /// Zero-based line containing byte offset `pos`.
    pub fn line_of(&self, pos: usize) -> usize {
        match self.line_starts.binary_search(&pos) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// Byte offset of the first character of the line containing `pos`.
    pub fn line_start(&self, pos: usize) -> usize {
        self.line_starts[self.line_of(pos)]
    }

    /// Byte offset of the line terminator (or end of text) for the line containing `pos`.
    pub fn line_end(&self, pos: usize) -> usize {
        let line = self.line_of(pos);
        match self.line_starts.get(line + 1) {
            Some(&next) => next - 1,
            None => self.source.len(),
        }
    }

    /// Leading whitespace of the line containing `pos`.
    pub fn indent_at(&self, pos: usize) -> &str {
        let start = self.line_start(pos);
        let line = &self.source[start..self.line_end(pos)];
        let width = line.len() - line.trim_start_matches([' ', '\t']).len();
        &line[..width]
    }

    /// True when only spaces/tabs precede `pos` on its line.
    pub fn starts_line(&self, pos: usize) -> bool {
        self.source[self.line_start(pos)..pos]
            .chars()
            .all(|c| c == ' ' || c == '\t')
    }

    pub fn text(&self, span: Range<usize>) -> &str {
        &self.source[span]
    }

    /// Indented S-expression dump, one node per line.
    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        fn walk(n: Node<'_>, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            if let Some(f) = n.field_name() {
                out.push_str(f);
                out.push_str(": ");
            }
            out.push_str(n.kind());
            out.push_str(&format!(" [{}..{})", n.start(), n.end()));
            if n.is_leaf() && n.is_named() {
                out.push(' ');
                out.push_str(&format!("{:?}", n.text()));
            }
            out.push('\n');
            for c in n.children() {
                walk(c, depth + 1, out);
            }
        }
        walk(self.root(), 0, &mut out);
        out
    }
}

impl fmt::Debug for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyntaxTree")
            .field("language", &self.language)
            .field("nodes", &self.nodes.len())
            .field("has_errors", &has_errors(self))
            .finish()
    }
}

fn line_starts(text: &str) -> Vec<usize> {
    std::iter::once(0)
        .chain(text.match_indices('\n').map(|(i, _)| i + 1))
        .collect()
}

/// Handle to one node of a [`SyntaxTree`].
#[derive(Clone, Copy)]
pub struct Node<'t> {
    tree: &'t SyntaxTree,
    id: NodeId,
}

impl PartialEq for Node<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.tree, other.tree) && self.id == other.id
    }
}

impl Eq for Node<'_> {}

impl fmt::Debug for Node<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.kind(), self.span())
    }
}

impl<'t> Node<'t> {
    fn data(&self) -> &'t NodeData {
        &self.tree.nodes[self.id as usize]
    }

    pub fn tree(&self) -> &'t SyntaxTree {
        self.tree
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn kind(&self) -> &'static str {
        self.data().kind
    }

    pub fn span(&self) -> Range<usize> {
        self.data().span.clone()
    }

    pub fn start(&self) -> usize {
        self.data().span.start
    }

    pub fn end(&self) -> usize {
        self.data().span.end
    }

    pub fn text(&self) -> &'t str {
        &self.tree.source[self.data().span.clone()]
    }

    pub fn is_named(&self) -> bool {
        self.data().named
    }

    pub fn is_error(&self) -> bool {
        self.data().flags & FLAG_ERROR != 0
    }

    pub fn is_missing(&self) -> bool {
        self.data().flags & FLAG_MISSING != 0
    }

    pub fn is_extra(&self) -> bool {
        self.data().flags & FLAG_EXTRA != 0
    }

    pub fn is_comment(&self) -> bool {
        self.tree.language.is_comment_kind(self.kind())
    }

    /// Field name under which this node hangs off its parent, if any.
    pub fn field_name(&self) -> Option<&'static str> {
        self.data().field
    }

    pub fn is_leaf(&self) -> bool {
        self.data().children.is_empty()
    }

    pub fn parent(&self) -> Option<Node<'t>> {
        self.data().parent.map(|id| Node {
            tree: self.tree,
            id,
        })
    }

    pub fn child_count(&self) -> usize {
        self.data().children.len()
    }

    pub fn child(&self, i: usize) -> Option<Node<'t>> {
        self.data().children.get(i).map(|&id| Node {
            tree: self.tree,
            id,
        })
    }

    pub fn children(&self) -> impl DoubleEndedIterator<Item = Node<'t>> + 't {
        let tree = self.tree;
        self.data()
            .children
            .iter()
            .map(move |&id| Node { tree, id })
    }

    pub fn named_children(&self) -> impl DoubleEndedIterator<Item = Node<'t>> + 't {
        self.children().filter(|c| c.is_named())
    }

    /// Named children that are neither comments nor other extras.
    pub fn code_children(&self) -> impl DoubleEndedIterator<Item = Node<'t>> + 't {
        self.children()
            .filter(|c| c.is_named() && !c.is_extra() && !c.is_comment())
    }

    pub fn child_by_field(&self, field: &str) -> Option<Node<'t>> {
        self.children().find(|c| c.field_name() == Some(field))
    }

    pub fn children_by_field<'a>(&self, field: &'a str) -> impl Iterator<Item = Node<'t>> + 'a
    where
        't: 'a,
    {
        self.children()
            .filter(move |c| c.field_name() == Some(field))
    }

    pub fn child_of_kind(&self, kind: &str) -> Option<Node<'t>> {
        self.children().find(|c| c.kind() == kind)
    }

    pub fn next_sibling(&self) -> Option<Node<'t>> {
        let parent = self.parent()?;
        let siblings = &parent.data().children;
        let pos = siblings.iter().position(|&id| id == self.id)?;
        siblings.get(pos + 1).map(|&id| Node {
            tree: self.tree,
            id,
        })
    }

    pub fn prev_sibling(&self) -> Option<Node<'t>> {
        let parent = self.parent()?;
        let siblings = &parent.data().children;
        let pos = siblings.iter().position(|&id| id == self.id)?;
        pos.checked_sub(1).map(|p| Node {
            tree: self.tree,
            id: siblings[p],
        })
    }

    pub fn ancestors(&self) -> impl Iterator<Item = Node<'t>> + 't {
        std::iter::successors(self.parent(), |n| n.parent())
    }

    /// This node and everything below it, in depth-first pre-order.
    pub fn descendants(&self) -> Descendants<'t> {
        Descendants {
            tree: self.tree,
            stack: vec![self.id],
        }
    }

    /// True if `other` is this node or lies below it.
    pub fn contains(&self, other: &Node<'_>) -> bool {
        other.id == self.id || other.ancestors().any(|a| a.id == self.id)
    }

    /// Source line (zero-based) where the node starts.
    pub fn start_line(&self) -> usize {
        self.tree.line_of(self.start())
    }

    pub fn end_line(&self) -> usize {
        self.tree
            .line_of(self.end().saturating_sub(1).max(self.start()))
    }
}

pub struct Descendants<'t> {
    tree: &'t SyntaxTree,
    stack: Vec<NodeId>,
}

impl<'t> Iterator for Descendants<'t> {
    type Item = Node<'t>;

    fn next(&mut self) -> Option<Node<'t>> {
        let id = self.stack.pop()?;
        let data = &self.tree.nodes[id as usize];
        self.stack.extend(data.children.iter().rev());
        Some(Node {
            tree: self.tree,
            id,
        })
    }
}
