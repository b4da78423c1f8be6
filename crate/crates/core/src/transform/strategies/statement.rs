use std::collections::HashSet;

use crate::syntax::{Edit, Node};
use crate::transform::analysis::{
    enclosing_function, function_scope, java_is_literal, java_numeric_rank, strip_parens, JavaTypes,
};
use crate::transform::ctx::{Candidates, Ctx, Site};

fn token<'t>(node: Node<'t>, kinds: &[&str]) -> Option<Node<'t>> {
    node.children()
        .find(|c| !c.is_named() && kinds.contains(&c.kind()))
}

fn java_in_block(stmt: Node<'_>) -> bool {
    stmt.parent().is_some_and(|p| {
        matches!(
            p.kind(),
            "block" | "program" | "constructor_body" | "switch_block_statement_group"
        )
    })
}

/// Separator placing a new statement on its own line after `node` when
/// `node` starts its line, otherwise on the same line.
fn stmt_sep(ctx: &Ctx<'_>, node: Node<'_>) -> String {
    if ctx.starts_line(node) {
        format!("\n{}", ctx.indent_of(node))
    } else {
        " ".into()
    }
}

// ----------------------------------------------------------------- GS-1 ----

fn integer_literal(ctx: &Ctx<'_>, node: Node<'_>) -> bool {
    let n = strip_parens(node);
    let ints: &[&str] = if ctx.is_java() {
        &[
            "decimal_integer_literal",
            "hex_integer_literal",
            "octal_integer_literal",
            "binary_integer_literal",
        ]
    } else {
        &["integer"]
    };
    if ints.contains(&n.kind()) {
        return true;
    }
    let (op_field, arg_field) = if ctx.is_java() {
        ("operator", "operand")
    } else {
        ("operator", "argument")
    };
    matches!(n.kind(), "unary_expression" | "unary_operator")
        && n.child_by_field(op_field).is_some_and(|o| o.kind() == "-")
        && n.child_by_field(arg_field)
            .is_some_and(|a| ints.contains(&a.kind()))
}

pub(super) fn return_via_variable(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    let mut used = HashSet::new();
    for ret in ctx.nodes_of(&["return_statement"]) {
        let Some(value) = ret.named_children().find(|c| !c.is_comment()) else {
            continue;
        };
        if !integer_literal(ctx, value) {
            continue;
        }
        let name = ctx.fresh_name("ret", &used);
        used.insert(name.clone());
        if ctx.is_java() {
            let lit = value.text();
            let lit_type = if lit.ends_with(['l', 'L']) {
                "long"
            } else {
                "int"
            };
            // a byte/short/char method may return an int constant but not an int variable
            let method_type = enclosing_function(ctx.lang(), ret)
                .filter(|f| f.kind() == "method_declaration")
                .and_then(|f| f.child_by_field("type"))
                .map(|t| t.text());
            let ty = match method_type {
                Some(t @ ("byte" | "short" | "char")) => t,
                _ => lit_type,
            };
            let decl = format!("{ty} {name} = {lit};");
            let edits = if java_in_block(ret) {
                vec![
                    ctx.insert_before(ret, &decl),
                    Edit::replace(value.span(), name),
                ]
            } else {
                vec![Edit::replace(
                    ret.span(),
                    format!("{{ {decl} return {name}; }}"),
                )]
            };
            sites.push(Site::at(ret, edits));
        } else {
            let assign = format!("{name} = {}", value.text());
            let edits = if ctx.starts_line(ret) {
                vec![
                    ctx.insert_before(ret, &assign),
                    Edit::replace(value.span(), name),
                ]
            } else {
                vec![
                    Edit::insert(ret.start(), format!("{assign}; ")),
                    Edit::replace(value.span(), name),
                ]
            };
            sites.push(Site::at(ret, edits));
        }
    }
    Candidates::new(sites, "no return of an integer literal")
}

// -------------------------------------------------------------- GS-2/3 ----

/// True if `name` occurs in `func` anywhere outside the nodes in `inside`.
fn mentioned_outside(func: Node<'_>, name: &str, inside: &[Node<'_>]) -> bool {
    func.descendants().any(|n| {
        n.kind() == "identifier" && n.text() == name && !inside.iter().any(|i| i.contains(&n))
    })
}

pub(super) fn move_declaration_into_for(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for f in ctx.nodes_of(&["for_statement"]) {
        let inits: Vec<Node<'_>> = f.children_by_field("init").collect();
        let [init] = inits.as_slice() else { continue };
        if init.kind() != "assignment_expression"
            || init.child_by_field("operator").map(|o| o.kind()) != Some("=")
        {
            continue;
        }
        let Some(var) = init
            .child_by_field("left")
            .filter(|l| l.kind() == "identifier")
        else {
            continue;
        };
        let Some(decl) = f
            .prev_sibling()
            .filter(|d| d.kind() == "local_variable_declaration")
        else {
            continue;
        };
        let declarators: Vec<Node<'_>> = decl.children_by_field("declarator").collect();
        let [d] = declarators.as_slice() else {
            continue;
        };
        let modifiers = decl.children().any(|c| c.kind() == "modifiers");
        let Some(ty) = decl.child_by_field("type") else {
            continue;
        };
        if modifiers
            || ty.text() == "var"
            || d.child_by_field("value").is_some()
            || d.child_by_field("dimensions").is_some()
            || d.child_by_field("name").map(|n| n.text()) != Some(var.text())
        {
            continue;
        }
        let scope = function_scope(ctx.lang(), f);
        if mentioned_outside(scope, var.text(), &[decl, f]) {
            continue;
        }
        sites.push(Site::at(
            f,
            vec![
                Edit::delete(line_or_span(ctx, decl)),
                Edit::insert(init.start(), format!("{} ", ty.text())),
            ],
        ));
    }
    Candidates::new(
        sites,
        "no declaration directly before a for loop that initializes it",
    )
}

fn line_or_span(ctx: &Ctx<'_>, node: Node<'_>) -> std::ops::Range<usize> {
    if ctx.starts_line(node) && ctx.ends_line(node) {
        let rest = &ctx.src()[node.end()..ctx.tree.line_end(node.end())];
        if rest.trim().is_empty() {
            let end = (ctx.tree.line_end(node.end()) + 1).min(ctx.src().len());
            return ctx.tree.line_start(node.start())..end;
        }
    }
    node.span()
}

pub(super) fn move_declaration_out_of_for(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for f in ctx.nodes_of(&["for_statement"]) {
        let Some(init) = f
            .child_by_field("init")
            .filter(|i| i.kind() == "local_variable_declaration")
        else {
            continue;
        };
        if !java_in_block(f) || init.children().any(|c| c.kind() == "modifiers") {
            continue;
        }
        let Some(ty) = init.child_by_field("type").filter(|t| t.text() != "var") else {
            continue;
        };
        let declarators: Vec<Node<'_>> = init.children_by_field("declarator").collect();
        let scope = function_scope(ctx.lang(), f);
        let mut names = Vec::new();
        let mut assigns = Vec::new();
        let mut ok = !declarators.is_empty();
        for d in &declarators {
            let (Some(name), Some(value)) = (d.child_by_field("name"), d.child_by_field("value"))
            else {
                ok = false;
                break;
            };
            let captured = f.descendants().any(|x| {
                matches!(x.kind(), "lambda_expression" | "class_body")
                    && x.descendants()
                        .any(|i| i.kind() == "identifier" && i.text() == name.text())
            });
            if value.kind() == "array_initializer"
                || captured
                || mentioned_outside(scope, name.text(), &[f])
            {
                ok = false;
                break;
            }
            let dims = d.child_by_field("dimensions").map_or("", |x| x.text());
            names.push(format!("{}{dims}", name.text()));
            assigns.push(format!("{} = {}", name.text(), value.text()));
        }
        if !ok {
            continue;
        }
        let decl = format!("{} {};", ty.text(), names.join(", "));
        sites.push(Site::at(
            f,
            vec![
                ctx.insert_before(f, &decl),
                Edit::replace(init.span(), format!("{};", assigns.join(", "))),
            ],
        ));
    }
    Candidates::new(sites, "no for loop declaring its variable in the header")
}

// ----------------------------------------------------------------- GS-4 ----

pub(super) fn split_declaration(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for decl in ctx.nodes_of(&["local_variable_declaration"]) {
        if !java_in_block(decl) {
            continue;
        }
        let final_ = decl
            .child_of_kind("modifiers")
            .is_some_and(|m| m.children().any(|c| c.kind() == "final"));
        let Some(ty) = decl.child_by_field("type") else {
            continue;
        };
        if final_ || ty.text() == "var" {
            continue;
        }
        let declarators: Vec<Node<'_>> = decl.children_by_field("declarator").collect();
        let Some(first) = declarators.first() else {
            continue;
        };
        let mut names = Vec::new();
        let mut assigns = Vec::new();
        let mut ok = true;
        for d in &declarators {
            let Some(name) = d.child_by_field("name") else {
                ok = false;
                break;
            };
            let dims = d.child_by_field("dimensions").map_or("", |x| x.text());
            names.push(format!("{}{dims}", name.text()));
            if let Some(value) = d.child_by_field("value") {
                if value.kind() == "array_initializer" {
                    ok = false;
                    break;
                }
                assigns.push(format!("{} = {};", name.text(), value.text()));
            }
        }
        if !ok || assigns.is_empty() {
            continue;
        }
        let prefix = ctx.text(decl.start()..first.start());
        let sep = stmt_sep(ctx, decl);
        let text = format!("{prefix}{};{sep}{}", names.join(", "), assigns.join(&sep));
        sites.push(Site::at(decl, vec![Edit::replace(decl.span(), text)]));
    }
    Candidates::new(sites, "no initialized local variable declaration")
}

// -------------------------------------------------------------- GS-5/6 ----

const JAVA_COMPARISONS: &[&str] = &["<", ">", "<=", ">=", "==", "!="];

fn complement(op: &str) -> Option<&'static str> {
    Some(match op {
        "<" => ">=",
        ">=" => "<",
        ">" => "<=",
        "<=" => ">",
        "==" => "!=",
        "!=" => "==",
        _ => return None,
    })
}

fn mirror(op: &str) -> Option<&'static str> {
    Some(match op {
        "<" => ">",
        ">" => "<",
        "<=" => ">=",
        ">=" => "<=",
        "==" => "==",
        "!=" => "!=",
        _ => return None,
    })
}

/// A comparison with exactly one operator: (left, operator, right).
fn comparison<'t>(ctx: &Ctx<'_>, node: Node<'t>) -> Option<(Node<'t>, Node<'t>, Node<'t>)> {
    if ctx.is_java() {
        if node.kind() != "binary_expression" {
            return None;
        }
        let op = node.child_by_field("operator")?;
        JAVA_COMPARISONS.contains(&op.kind()).then_some(())?;
        Some((
            node.child_by_field("left")?,
            op,
            node.child_by_field("right")?,
        ))
    } else {
        if node.kind() != "comparison_operator" {
            return None;
        }
        let ops: Vec<Node<'_>> = node.children_by_field("operators").collect();
        let operands: Vec<Node<'_>> = node.named_children().filter(|c| !c.is_comment()).collect();
        match (ops.as_slice(), operands.as_slice()) {
            ([op], [l, r]) if complement(op.kind()).is_some() => Some((*l, *op, *r)),
            _ => None,
        }
    }
}

fn java_floating(types: &JavaTypes, node: Node<'_>) -> bool {
    types
        .of_expr(node)
        .is_some_and(|t| matches!(t.as_str(), "float" | "double" | "Float" | "Double"))
}

pub(super) fn negate_comparison(ctx: &Ctx<'_>) -> Candidates {
    let types = ctx.is_java().then(|| JavaTypes::collect(ctx.root()));
    let mut sites = Vec::new();
    for node in ctx.nodes_of(&["binary_expression", "comparison_operator"]) {
        let Some((l, op, r)) = comparison(ctx, node) else {
            continue;
        };
        let Some(comp) = complement(op.kind()) else {
            continue;
        };
        let text = match &types {
            Some(types) => {
                // complement negation is wrong for NaN
                if java_floating(types, l) || java_floating(types, r) {
                    continue;
                }
                format!("!({} {comp} {})", l.text(), r.text())
            }
            None => {
                let float = |n: Node<'_>| strip_parens(n).kind() == "float";
                if float(l) || float(r) {
                    continue;
                }
                format!("not ({} {comp} {})", l.text(), r.text())
            }
        };
        sites.push(Site::at(node, vec![Edit::replace(node.span(), text)]));
    }
    Candidates::new(sites, "no comparison with a known complement")
}

/// Operands whose evaluation order cannot be observed. `Some(true)` marks
/// an operand that may throw (member access on an object).
fn swappable(ctx: &Ctx<'_>, node: Node<'_>) -> Option<bool> {
    let n = strip_parens(node);
    if ctx.is_java() {
        match n.kind() {
            "identifier" | "this" => Some(false),
            k if java_is_literal(k) => Some(false),
            "field_access" => {
                let obj = n.child_by_field("object")?;
                match obj.kind() {
                    "this" | "super" => Some(false),
                    _ => swappable(ctx, obj).map(|_| true),
                }
            }
            _ => None,
        }
    } else {
        match n.kind() {
            "identifier" | "integer" | "float" | "true" | "false" | "none" => Some(false),
            "string" if !n.descendants().any(|d| d.kind() == "interpolation") => Some(false),
            "attribute" => swappable(ctx, n.child_by_field("object")?).map(|_| true),
            _ => None,
        }
    }
}

pub(super) fn swap_comparison(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for node in ctx.nodes_of(&["binary_expression", "comparison_operator"]) {
        let Some((l, op, r)) = comparison(ctx, node) else {
            continue;
        };
        let Some(m) = mirror(op.kind()) else { continue };
        match (swappable(ctx, l), swappable(ctx, r)) {
            (Some(a), Some(b)) if !(a && b) => {}
            _ => continue,
        }
        sites.push(Site::at(
            node,
            vec![Edit::replace(
                node.span(),
                format!("{} {m} {}", r.text(), l.text()),
            )],
        ));
    }
    Candidates::new(sites, "no comparison between side-effect-free operands")
}

// ----------------------------------------------------------------- GS-7 ----

fn atomic(ctx: &Ctx<'_>, node: Node<'_>) -> bool {
    let simple: &[&str] = if ctx.is_java() {
        &[
            "identifier",
            "parenthesized_expression",
            "method_invocation",
            "field_access",
            "array_access",
            "decimal_integer_literal",
            "hex_integer_literal",
            "octal_integer_literal",
            "binary_integer_literal",
            "decimal_floating_point_literal",
            "hex_floating_point_literal",
            "true",
            "false",
            "character_literal",
            "string_literal",
            "null_literal",
            "this",
        ]
    } else {
        &[
            "identifier",
            "parenthesized_expression",
            "call",
            "attribute",
            "subscript",
            "integer",
            "float",
            "true",
            "false",
            "none",
            "string",
            "list",
            "tuple",
            "dictionary",
            "set",
        ]
    };
    simple.contains(&node.kind())
}

/// Whether `x OP= e` may become `x = x OP e` under Java's typing rules:
/// compound assignment casts implicitly, plain assignment does not.
fn java_expansion_typechecks(types: &JavaTypes, x: &str, op: &str, e: Node<'_>) -> bool {
    let Some(tx) = types.of_name(x) else {
        return false;
    };
    if tx == "String" {
        return op == "+=";
    }
    if tx == "boolean" {
        return matches!(op, "&=" | "|=" | "^=");
    }
    let Some(rx) = java_numeric_rank(tx) else {
        return false;
    };
    if rx < 3 {
        return false;
    }
    if matches!(op, "<<=" | ">>=" | ">>>=") {
        return true;
    }
    let Some(te) = types.of_expr(e) else {
        return false;
    };
    java_numeric_rank(&te).is_some_and(|re| re <= rx)
}

/// Python names known to hold numbers or strings: assigned only from
/// such literals (or not assigned at all, e.g. parameters, are unknown).
fn python_scalar_names(ctx: &Ctx<'_>) -> HashSet<String> {
    let mut scalar = HashSet::new();
    let mut other = HashSet::new();
    for a in ctx.nodes_of(&["assignment"]) {
        let (Some(l), Some(r)) = (a.child_by_field("left"), a.child_by_field("right")) else {
            continue;
        };
        if l.kind() != "identifier" {
            continue;
        }
        let lit = matches!(
            strip_parens(r).kind(),
            "integer" | "float" | "string" | "concatenated_string"
        ) || (strip_parens(r).kind() == "unary_operator"
            && strip_parens(r)
                .named_children()
                .any(|c| matches!(c.kind(), "integer" | "float")));
        if lit {
            scalar.insert(l.text().to_string());
        } else {
            other.insert(l.text().to_string());
        }
    }
    scalar.retain(|n| !other.contains(n));
    scalar
}

pub(super) fn expand_compound_assignment(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    let types = ctx.is_java().then(|| JavaTypes::collect(ctx.root()));
    let scalars = (!ctx.is_java()).then(|| python_scalar_names(ctx));
    let kind = if ctx.is_java() {
        "assignment_expression"
    } else {
        "augmented_assignment"
    };
    for a in ctx.nodes_of(&[kind]) {
        let (Some(x), Some(op), Some(e)) = (
            a.child_by_field("left"),
            a.child_by_field("operator"),
            a.child_by_field("right"),
        ) else {
            continue;
        };
        let op_text = op.kind();
        if x.kind() != "identifier" || op_text == "=" || !op_text.ends_with('=') {
            continue;
        }
        let ok = match (&types, &scalars) {
            (Some(types), _) => java_expansion_typechecks(types, x.text(), op_text, e),
            (_, Some(scalars)) => {
                // `+=` on a list mutates in place; `x = x + e` rebinds
                matches!(strip_parens(e).kind(), "integer" | "float" | "string")
                    || scalars.contains(x.text())
            }
            _ => false,
        };
        if !ok {
            continue;
        }
        let bin = &op_text[..op_text.len() - 1];
        let rhs = if atomic(ctx, e) {
            e.text().to_string()
        } else {
            format!("({})", e.text())
        };
        sites.push(Site::at(
            a,
            vec![Edit::replace(
                a.span(),
                format!("{} = {} {bin} {rhs}", x.text(), x.text()),
            )],
        ));
    }
    Candidates::new(sites, "no compound assignment to a simple variable")
}

// ----------------------------------------------------------------- GS-8 ----

pub(super) fn expand_increment(ctx: &Ctx<'_>) -> Candidates {
    let types = JavaTypes::collect(ctx.root());
    let mut sites = Vec::new();
    for stmt in ctx.nodes_of(&["expression_statement"]) {
        let Some(up) = stmt
            .named_children()
            .next()
            .filter(|u| u.kind() == "update_expression")
        else {
            continue;
        };
        let Some(x) = up
            .named_children()
            .next()
            .filter(|x| x.kind() == "identifier")
        else {
            continue;
        };
        let wide = types
            .of_name(x.text())
            .and_then(java_numeric_rank)
            .is_some_and(|r| r >= 3);
        if !wide {
            continue;
        }
        let Some(op) = token(up, &["++", "--"]) else {
            continue;
        };
        let bin = if op.kind() == "++" { "+" } else { "-" };
        sites.push(Site::at(
            up,
            vec![Edit::replace(
                up.span(),
                format!("{0} = {0} {bin} 1", x.text()),
            )],
        ));
    }
    Candidates::new(
        sites,
        "no increment or decrement statement on an int, long, float or double variable",
    )
}

// ------------------------------------------------------------- GS-9/10 ----

/// Body positions that accept a single statement.
fn java_bodies<'t>(ctx: &Ctx<'t>) -> Vec<Node<'t>> {
    let mut out = Vec::new();
    for n in ctx.nodes_of(&[
        "if_statement",
        "for_statement",
        "enhanced_for_statement",
        "while_statement",
        "do_statement",
    ]) {
        if n.kind() == "if_statement" {
            out.extend(n.child_by_field("consequence"));
            out.extend(
                n.child_by_field("alternative")
                    .filter(|a| a.kind() != "if_statement"),
            );
        } else {
            out.extend(n.child_by_field("body"));
        }
    }
    out
}

pub(super) fn add_braces(ctx: &Ctx<'_>) -> Candidates {
    let sites = java_bodies(ctx)
        .into_iter()
        .filter(|b| b.kind() != "block")
        .map(|b| {
            Site::at(
                b,
                vec![Edit::insert(b.start(), "{ "), Edit::insert(b.end(), " }")],
            )
        })
        .collect();
    Candidates::new(sites, "no single-statement body without braces")
}

/// True if `stmt` ends in an `if` without `else`, so that a following
/// `else` would attach to it once enclosing braces are gone.
fn ends_in_open_if(stmt: Node<'_>) -> bool {
    match stmt.kind() {
        "if_statement" => match stmt.child_by_field("alternative") {
            None => true,
            Some(alt) => ends_in_open_if(alt),
        },
        "for_statement" | "enhanced_for_statement" | "while_statement" => {
            stmt.child_by_field("body").is_some_and(ends_in_open_if)
        }
        "labeled_statement" => stmt.named_children().last().is_some_and(ends_in_open_if),
        _ => false,
    }
}

pub(super) fn remove_braces(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for b in java_bodies(ctx) {
        if b.kind() != "block" {
            continue;
        }
        let inner: Vec<Node<'_>> = b.named_children().filter(|c| !c.is_comment()).collect();
        let [stmt] = inner.as_slice() else { continue };
        if matches!(
            stmt.kind(),
            "local_variable_declaration"
                | "local_class_declaration"
                | "class_declaration"
                | "record_declaration"
                | "interface_declaration"
                | "enum_declaration"
        ) {
            continue;
        }
        let dangling = b.field_name() == Some("consequence")
            && b.parent()
                .is_some_and(|p| p.child_by_field("alternative").is_some())
            && ends_in_open_if(*stmt);
        if dangling {
            continue;
        }
        let (Some(open), Some(close)) = (
            token(b, &["{"]),
            b.children().rev().find(|c| c.kind() == "}"),
        ) else {
            continue;
        };
        let src = ctx.src().as_bytes();
        let hspace = |c: u8| c == b' ' || c == b'\t';
        let (mut o0, mut o1) = (open.start(), open.end());
        while o1 < stmt.start() && hspace(src[o1]) {
            o1 += 1;
        }
        if src.get(o1) == Some(&b'\n') {
            while o0 > 0 && hspace(src[o0 - 1]) {
                o0 -= 1;
            }
        }
        let mut c0 = close.start();
        while c0 > stmt.end() && hspace(src[c0 - 1]) {
            c0 -= 1;
        }
        if c0 > stmt.end() && src[c0 - 1] == b'\n' {
            c0 -= 1;
        }
        sites.push(Site::at(
            b,
            vec![Edit::delete(o0..o1), Edit::delete(c0..close.end())],
        ));
    }
    Candidates::new(
        sites,
        "no braced body holding a single non-declaration statement",
    )
}
