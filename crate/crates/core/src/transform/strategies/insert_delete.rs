use std::collections::HashSet;
use std::ops::Range;

use rand::Rng;

use crate::syntax::{Edit, Language, Node};
use crate::transform::analysis::{
    enclosing_function, java_completes_normally, java_is_literal, python_is_binding,
    python_special_names, python_uses_dynamic_scope, statements, strip_parens,
};
use crate::transform::ctx::{Candidates, Ctx, Site};
use crate::transform::InsertLocation;

/// Dead-code templates for ID-2. `{v}` is a fresh variable name and `{u}`
/// one indentation step.
pub(crate) const JAVA_JUNK: &[&str] = &[
    "int {v} = 0;",
    "if (false) { int {v} = 0; }",
    "boolean {v} = false;",
    "for (int {v} = 0; {v} < 0; {v}++) { }",
];

pub(crate) const PYTHON_JUNK: &[&str] = &[
    "{v} = 0",
    "if False:\n{u}{v} = 0",
    "{v} = None",
    "for {v} in range(0):\n{u}pass",
];

pub(crate) fn junk_templates(lang: Language) -> &'static [&'static str] {
    match lang {
        Language::Java => JAVA_JUNK,
        Language::Python => PYTHON_JUNK,
    }
}

/// A statement list that insertions target.
struct Body<'t> {
    block: Node<'t>,
    /// Nodes that must stay first (docstring, `__future__` imports).
    header: Option<Node<'t>>,
    stmts: Vec<Node<'t>>,
}

fn is_docstring(n: Node<'_>) -> bool {
    n.kind() == "expression_statement"
        && n.named_children().count() == 1
        && n.named_children()
            .next()
            .is_some_and(|c| matches!(c.kind(), "string" | "concatenated_string"))
}

/// The body of the first function in the snippet, or its top level when it
/// defines no function.
fn host_body<'t>(ctx: &Ctx<'t>) -> Option<Body<'t>> {
    let block = if ctx.is_java() {
        ctx.nodes_of(&["method_declaration", "constructor_declaration"])
            .into_iter()
            .find_map(|m| m.child_by_field("body"))
            .unwrap_or_else(|| ctx.root())
    } else {
        ctx.nodes_of(&["function_definition"])
            .into_iter()
            .find_map(|f| f.child_by_field("body"))
            .unwrap_or_else(|| ctx.root())
    };
    let mut stmts = statements(ctx.lang(), block);
    let mut header = None;
    if !ctx.is_java() {
        while let Some(first) = stmts.first().copied() {
            if (header.is_none() && is_docstring(first))
                || first.kind() == "future_import_statement"
            {
                header = Some(first);
                stmts.remove(0);
            } else {
                break;
            }
        }
    }
    Some(Body {
        block,
        header,
        stmts,
    })
}

/// Inserts `code` before `stmt`. Python statements must start their line.
fn before(ctx: &Ctx<'_>, stmt: Node<'_>, code: &str) -> Option<Edit> {
    if !ctx.is_java() && !ctx.starts_line(stmt) {
        return None;
    }
    Some(ctx.insert_before(stmt, code))
}

/// Inserts `code` after `stmt`; a one-line Python statement that shares its
/// line is followed by `; code`.
fn after(ctx: &Ctx<'_>, stmt: Node<'_>, code: &str) -> Option<Edit> {
    if ctx.is_java() || (ctx.starts_line(stmt) && ctx.ends_line(stmt)) {
        return Some(ctx.insert_after(stmt, code));
    }
    if code.contains('\n') || stmt.named_children().any(|c| c.kind() == "block") {
        return None;
    }
    Some(Edit::insert(stmt.end(), format!("; {code}")))
}

/// Inserts into a Java block that has no statements.
fn into_empty_java_block(ctx: &Ctx<'_>, block: Node<'_>, code: &str) -> Option<Edit> {
    let close = block.children().rev().find(|c| c.kind() == "}")?;
    if ctx.starts_line(close) && close.start_line() > block.start_line() {
        let indent = format!("{}{}", ctx.indent_of(close), ctx.indent_unit());
        let lines: String = code.lines().map(|l| format!("{indent}{l}\n")).collect();
        Some(Edit::insert(ctx.tree.line_start(close.start()), lines))
    } else {
        Some(Edit::insert(close.start(), format!(" {code} ")))
    }
}

/// Edit placing `code` at the statement boundary `k` (0 = before the first
/// statement, `stmts.len()` = after the last). `inline` is the variant used
/// when the code must share a line with other code.
fn at_boundary(ctx: &Ctx<'_>, body: &Body<'_>, k: usize, code: &str, inline: &str) -> Option<Edit> {
    let n = body.stmts.len();
    if n == 0 {
        return match body.header {
            Some(h) => after(ctx, h, code),
            None if ctx.is_java() && body.block.kind() != "program" => {
                into_empty_java_block(ctx, body.block, inline)
            }
            None => None,
        };
    }
    if k < n {
        let s = body.stmts[k];
        let text = if ctx.starts_line(s) { code } else { inline };
        before(ctx, s, text)
    } else {
        let s = body.stmts[n - 1];
        let text = if ctx.starts_line(s) && ctx.ends_line(s) {
            code
        } else {
            inline
        };
        after(ctx, s, text)
    }
}

fn boundary(ctx: &Ctx<'_>, body: &Body<'_>, location: InsertLocation) -> usize {
    let n = body.stmts.len();
    match location {
        InsertLocation::Front => 0,
        InsertLocation::End => n,
        InsertLocation::Middle if n < 2 => 0,
        InsertLocation::Middle => ctx.rng("location").gen_range(1..n),
    }
}

// ----------------------------------------------------------------- ID-1 ----

pub(super) fn add_comment(ctx: &Ctx<'_>) -> Candidates {
    let Some(body) = host_body(ctx) else {
        return Candidates::none("no statement list to comment");
    };
    let note = format!("auto-generated note {}", ctx.config.seed);
    let (code, inline) = if ctx.is_java() {
        (format!("// {note}"), format!("/* {note} */"))
    } else {
        (format!("# {note}"), format!("# {note}"))
    };
    let k = boundary(ctx, &body, ctx.config.insert_location);
    let sites = at_boundary(ctx, &body, k, &code, &inline)
        .filter(|e| ctx.is_java() || !python_comment_breaks_line(ctx, e))
        .map(|e| vec![Site::new(body.block.span(), vec![e])])
        .unwrap_or_default();
    Candidates::new(sites, "no statement boundary where a comment fits")
}

/// A `#` comment inserted mid-line would swallow the rest of the line.
fn python_comment_breaks_line(ctx: &Ctx<'_>, edit: &Edit) -> bool {
    !edit.replacement.ends_with('\n') && !edit.replacement.starts_with('\n') && {
        let rest = &ctx.src()[edit.span.start..ctx.tree.line_end(edit.span.start)];
        !rest.trim().is_empty()
    }
}

// ----------------------------------------------------------------- ID-2 ----

pub(super) fn add_junk(ctx: &Ctx<'_>) -> Candidates {
    let Some(body) = host_body(ctx) else {
        return Candidates::none("no statement list for junk code");
    };
    let templates = junk_templates(ctx.lang());
    let index = ctx
        .config
        .junk_template_index
        .unwrap_or_else(|| ctx.rng("template").gen_range(0..templates.len()));
    let Some(template) = templates.get(index) else {
        return Candidates::none(format!("junk template index {index} out of range"));
    };
    let var = ctx.fresh_name("junk", &HashSet::new());
    let code = template
        .replace("{v}", &var)
        .replace("{u}", &ctx.indent_unit());
    let mut k = boundary(ctx, &body, ctx.config.insert_location);
    // Java rejects unreachable statements, so code after a final return
    // moves in front of it
    if ctx.is_java()
        && k > 0
        && k == body.stmts.len()
        && !java_completes_normally(body.stmts[k - 1])
    {
        k -= 1;
    }
    let sites = at_boundary(ctx, &body, k, &code, &code)
        .map(|e| vec![Site::new(body.block.span(), vec![e])])
        .unwrap_or_default();
    Candidates::new(sites, "no statement boundary where junk code fits")
}

// ----------------------------------------------------------------- ID-3 ----

pub(super) fn add_return(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        for m in ctx.nodes_of(&["method_declaration", "constructor_declaration"]) {
            let void = m.kind() == "constructor_declaration"
                || m.child_by_field("type")
                    .is_some_and(|t| t.kind() == "void_type");
            let Some(body) = m.child_by_field("body").filter(|_| void) else {
                continue;
            };
            let stmts = statements(ctx.lang(), body);
            let edit = match stmts.last() {
                None => into_empty_java_block(ctx, body, "return;"),
                Some(last)
                    if last.kind() != "return_statement" && java_completes_normally(*last) =>
                {
                    Some(ctx.insert_after(*last, "return;"))
                }
                Some(_) => None,
            };
            sites.extend(edit.map(|e| Site::at(m, vec![e])));
        }
    } else {
        for f in ctx.nodes_of(&["function_definition"]) {
            let Some(body) = f.child_by_field("body") else {
                continue;
            };
            let stmts = statements(ctx.lang(), body);
            let Some(last) = stmts.last() else { continue };
            if last.kind() == "return_statement" {
                continue;
            }
            sites.extend(after(ctx, *last, "return None").map(|e| Site::at(f, vec![e])));
        }
    }
    Candidates::new(
        sites,
        "no function without a final return (non-void Java methods are skipped)",
    )
}

// ----------------------------------------------------------------- ID-4 ----

pub(super) fn add_import(ctx: &Ctx<'_>) -> Candidates {
    let (name, code) = if ctx.is_java() {
        ("UUID", "import java.util.UUID;")
    } else {
        ("uuid", "import uuid")
    };
    if ctx.name_taken(name) {
        return Candidates::none(format!("`{name}` already appears in the snippet"));
    }
    let edit = import_edit(ctx, code);
    let sites = edit
        .map(|e| vec![Site::new(e.span.clone(), vec![e])])
        .unwrap_or_default();
    Candidates::new(sites, "no place for an import")
}

/// Edit adding an import line after the existing imports, or at the top.
pub(super) fn import_edit(ctx: &Ctx<'_>, code: &str) -> Option<Edit> {
    let root = ctx.root();
    let top: Vec<Node<'_>> = root.named_children().filter(|c| !c.is_comment()).collect();
    let import_kinds: &[&str] = if ctx.is_java() {
        &["import_declaration", "package_declaration"]
    } else {
        &[
            "import_statement",
            "import_from_statement",
            "future_import_statement",
        ]
    };
    let anchor = top
        .iter()
        .rev()
        .find(|n| import_kinds.contains(&n.kind()))
        .copied()
        .or_else(|| {
            top.first()
                .copied()
                .filter(|n| !ctx.is_java() && is_docstring(*n))
        });
    match (anchor, top.first()) {
        (Some(a), _) => after(ctx, a, code),
        (None, Some(first)) if ctx.starts_line(*first) => Some(Edit::insert(
            ctx.tree.line_start(first.start()),
            format!("{code}\n"),
        )),
        _ => None,
    }
}

// ----------------------------------------------------------------- ID-5 ----

fn is_python_magic_comment(ctx: &Ctx<'_>, c: Node<'_>) -> bool {
    let line = ctx.tree.line_of(c.start());
    (line == 0 && c.text().starts_with("#!"))
        || (line <= 1 && (c.text().contains("coding:") || c.text().contains("coding=")))
}

/// Span that removes `node` together with its line when it owns the line,
/// or together with the blanks before it when it trails other code.
fn removal_span(ctx: &Ctx<'_>, node: Node<'_>) -> Range<usize> {
    let src = ctx.src();
    if ctx.starts_line(node) && ctx.ends_line(node) {
        let end = (ctx.tree.line_end(node.end()) + 1).min(src.len());
        return ctx.tree.line_start(node.start())..end;
    }
    let rest = &src[node.end()..ctx.tree.line_end(node.end())];
    if rest.trim().is_empty() {
        let lead = src[..node.start()].trim_end_matches([' ', '\t']).len();
        return lead..node.end();
    }
    node.span()
}

pub(super) fn delete_comments(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for c in ctx.tree.nodes().filter(|n| n.is_comment()) {
        if !ctx.is_java() && is_python_magic_comment(ctx, c) {
            continue;
        }
        let span = removal_span(ctx, c);
        let src = ctx.src();
        // keep neighbouring tokens apart: `a/*x*/b` must not become `ab`
        let glued = span == c.span()
            && !src[..span.start].ends_with(char::is_whitespace)
            && !src[span.end..].starts_with(char::is_whitespace)
            && span.start > 0;
        let replacement = if glued { " " } else { "" };
        sites.push(Site::at(c, vec![Edit::replace(span, replacement)]));
    }
    Candidates::new(sites, "no comment")
}

// ----------------------------------------------------------------- ID-6 ----

pub(super) fn java_print_call(stmt: Node<'_>) -> bool {
    let Some(call) = stmt
        .named_children()
        .next()
        .filter(|c| c.kind() == "method_invocation")
    else {
        return false;
    };
    let stream = call
        .child_by_field("object")
        .map(|o| o.text().replace(char::is_whitespace, ""));
    let name = call.child_by_field("name").map(|n| n.text());
    matches!(stream.as_deref(), Some("System.out" | "System.err"))
        && matches!(name, Some("print" | "println" | "printf" | "format"))
}

pub(super) fn python_print_call(stmt: Node<'_>) -> bool {
    let mut kids = stmt.named_children().filter(|c| !c.is_comment());
    let (Some(call), None) = (kids.next(), kids.next()) else {
        return false;
    };
    call.kind() == "call"
        && call
            .child_by_field("function")
            .is_some_and(|f| f.kind() == "identifier" && f.text() == "print")
}

pub(super) fn python_print_rebound(ctx: &Ctx<'_>) -> bool {
    python_special_names(ctx.root()).contains("print")
        || ctx
            .nodes_of(&["identifier"])
            .into_iter()
            .any(|n| n.text() == "print" && python_is_binding(n))
}

pub(super) fn delete_print(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        for s in ctx.nodes_of(&["expression_statement"]) {
            if java_print_call(s) {
                sites.push(Site::at(s, vec![Edit::replace(s.span(), ";")]));
            }
        }
    } else if !python_print_rebound(ctx) {
        for s in ctx.nodes_of(&["expression_statement", "print_statement"]) {
            if s.kind() == "print_statement" || python_print_call(s) {
                sites.push(Site::at(s, vec![Edit::replace(s.span(), "pass")]));
            }
        }
    }
    Candidates::new(sites, "no print statement")
}

// ----------------------------------------------------------------- ID-7 ----

/// Initializers whose evaluation cannot throw or have side effects.
fn java_removable_init(node: Node<'_>) -> bool {
    match node.kind() {
        "identifier" => true,
        k if java_is_literal(k) => true,
        "parenthesized_expression" => node.named_children().all(java_removable_init),
        "binary_expression" => {
            let op = node.child_by_field("operator").map(|o| o.kind());
            !matches!(op, Some("/" | "%"))
                && node.child_by_field("left").is_some_and(java_removable_init)
                && node
                    .child_by_field("right")
                    .is_some_and(java_removable_init)
        }
        "unary_expression" => node
            .child_by_field("operand")
            .is_some_and(java_removable_init),
        _ => false,
    }
}

fn python_removable_init(node: Node<'_>) -> bool {
    match node.kind() {
        "identifier" | "integer" | "float" | "true" | "false" | "none" => true,
        "string" => !node.descendants().any(|d| d.kind() == "interpolation"),
        "parenthesized_expression" | "unary_operator" => node
            .named_children()
            .filter(|c| !c.is_comment())
            .all(python_removable_init),
        "binary_operator" => {
            let op = node.child_by_field("operator").map(|o| o.kind());
            !matches!(op, Some("/" | "//" | "%" | "**" | "@"))
                && node
                    .named_children()
                    .filter(|c| !c.is_comment())
                    .all(python_removable_init)
        }
        _ => false,
    }
}

pub(super) fn remove_unused_variable(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        for decl in ctx.nodes_of(&["local_variable_declaration"]) {
            if decl.parent().is_none_or(|p| p.kind() != "block") {
                continue;
            }
            let Some(func) = enclosing_function(ctx.lang(), decl) else {
                continue;
            };
            let declarators: Vec<Node<'_>> = decl.children_by_field("declarator").collect();
            let unused = declarators.iter().all(|d| {
                let Some(name) = d.child_by_field("name") else {
                    return false;
                };
                let init_ok = d.child_by_field("value").is_none_or(java_removable_init);
                init_ok
                    && !func
                        .descendants()
                        .any(|n| n.kind() == "identifier" && n.text() == name.text() && n != name)
            });
            if !declarators.is_empty() && unused {
                sites.push(Site::at(decl, vec![Edit::delete(removal_span(ctx, decl))]));
            }
        }
    } else {
        let special = python_special_names(ctx.root());
        let mut found: Vec<Node<'_>> = Vec::new();
        for stmt in ctx.nodes_of(&["expression_statement"]) {
            if python_unused_assignment(ctx, stmt, &special) {
                found.push(stmt);
            }
        }
        // a block must keep one statement: when every statement would go,
        // the first one stays
        let mut kept = HashSet::new();
        for stmt in &found {
            let Some(block) = stmt.parent() else { continue };
            let emptied = statements(ctx.lang(), block)
                .iter()
                .all(|s| found.contains(s));
            if emptied && kept.insert(block.id()) {
                continue;
            }
            sites.push(Site::at(
                *stmt,
                vec![Edit::delete(removal_span(ctx, *stmt))],
            ));
        }
    }
    Candidates::new(sites, "no unused variable")
}

fn python_unused_assignment(ctx: &Ctx<'_>, stmt: Node<'_>, special: &HashSet<String>) -> bool {
    let mut kids = stmt.named_children().filter(|c| !c.is_comment());
    let (Some(assign), None) = (kids.next(), kids.next()) else {
        return false;
    };
    if assign.kind() != "assignment" || !ctx.starts_line(stmt) || !ctx.ends_line(stmt) {
        return false;
    }
    let (Some(left), Some(right)) = (
        assign.child_by_field("left"),
        assign.child_by_field("right"),
    ) else {
        return false;
    };
    if left.kind() != "identifier" || !python_removable_init(strip_parens(right)) {
        return false;
    }
    let func = stmt
        .ancestors()
        .find(|a| matches!(a.kind(), "function_definition" | "class_definition"));
    let Some(func) = func.filter(|a| a.kind() == "function_definition") else {
        return false;
    };
    let name = left.text();
    if special.contains(name) || python_uses_dynamic_scope(func) {
        return false;
    }
    !func
        .descendants()
        .any(|n| n.kind() == "identifier" && n.text() == name && n != left)
}
