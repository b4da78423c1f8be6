use std::collections::HashSet;

use crate::syntax::{Edit, Node};
use crate::transform::analysis::{
    java_is_variable_position, java_numeric_rank, python_is_binding, python_is_variable_position,
    python_special_names, strip_parens, JavaTypes,
};
use crate::transform::ctx::{Candidates, Ctx, Site};

use super::insert_delete::{import_edit, java_print_call, python_print_call, python_print_rebound};

// -------------------------------------------------------------- GT-1/2 ----

/// Positions whose value is only ever tested for truth.
fn boolean_context(node: Node<'_>) -> bool {
    let Some(parent) = node.parent() else {
        return false;
    };
    match parent.kind() {
        "if_statement" | "elif_clause" | "while_statement" => {
            node.field_name() == Some("condition")
        }
        "assert_statement" => parent.named_children().next() == Some(node),
        "not_operator" => true,
        "conditional_expression" => parent.named_children().nth(1) == Some(node),
        "parenthesized_expression" | "boolean_operator" => boolean_context(parent),
        _ => false,
    }
}

const PY_INT_RESULT_OPS: &[&str] = &["+", "-", "*", "/", "//", "%", "**", "<<", ">>"];

/// Whether the value of `node` can become the equal int without any reader
/// telling the difference: it is only tested for truth, compared or used in
/// arithmetic, directly or through plain variables. Printing, returning,
/// passing it on, `is` tests and bitwise operators (which keep `bool`) can
/// all tell.
fn python_bool_value_safe(ctx: &Ctx<'_>, node: Node<'_>, visited: &mut HashSet<String>) -> bool {
    let mut e = node;
    loop {
        if boolean_context(e) {
            return true;
        }
        let Some(p) = e.parent() else { return false };
        match p.kind() {
            "parenthesized_expression" | "boolean_operator" => e = p,
            "conditional_expression" => e = p,
            "not_operator" | "expression_statement" => return true,
            "comparison_operator" => {
                return !p
                    .children_by_field("operators")
                    .any(|o| matches!(o.kind(), "is" | "is not"))
            }
            "binary_operator" => {
                return p
                    .child_by_field("operator")
                    .is_some_and(|o| PY_INT_RESULT_OPS.contains(&o.kind()))
            }
            "unary_operator" => return true,
            "assignment" => {
                let left = p.child_by_field("left");
                if e.field_name() != Some("right") || left.map(|l| l.kind()) != Some("identifier") {
                    return false;
                }
                return python_name_uses_safe(ctx, left.unwrap().text(), visited);
            }
            "default_parameter" | "typed_default_parameter" => {
                let name = p.child_by_field("name");
                if e.field_name() != Some("value") || name.map(|n| n.kind()) != Some("identifier") {
                    return false;
                }
                return python_name_uses_safe(ctx, name.unwrap().text(), visited);
            }
            _ => return false,
        }
    }
}

/// Every read of `name` anywhere in the file passes [`python_bool_value_safe`].
fn python_name_uses_safe(ctx: &Ctx<'_>, name: &str, visited: &mut HashSet<String>) -> bool {
    if !visited.insert(name.to_string()) {
        return true;
    }
    if python_special_names(ctx.root()).contains(name) {
        return false;
    }
    ctx.root().descendants().all(|id| {
        if id.kind() != "identifier" || id.text() != name || !python_is_variable_position(id) {
            return true;
        }
        if let Some(p) = id.parent().filter(|p| p.kind() == "augmented_assignment") {
            if id.field_name() == Some("left") {
                return p.child_by_field("operator").is_some_and(|o| {
                    PY_INT_RESULT_OPS
                        .iter()
                        .any(|op| o.kind().strip_suffix('=') == Some(op))
                });
            }
        }
        python_is_binding(id) || python_bool_value_safe(ctx, id, visited)
    })
}

pub(super) fn bool_to_int(ctx: &Ctx<'_>) -> Candidates {
    let sites = ctx
        .nodes_of(&["true", "false"])
        .into_iter()
        .filter(|n| python_bool_value_safe(ctx, *n, &mut HashSet::new()))
        .map(|n| {
            let v = if n.kind() == "true" { "1" } else { "0" };
            Site::at(n, vec![Edit::replace(n.span(), v)])
        })
        .collect();
    Candidates::new(
        sites,
        "no True/False literal whose value is only tested, compared or used in arithmetic",
    )
}

pub(super) fn int_to_bool(ctx: &Ctx<'_>) -> Candidates {
    let sites = ctx
        .nodes_of(&["integer"])
        .into_iter()
        .filter(|n| matches!(n.text(), "0" | "1") && boolean_context(*n))
        .map(|n| {
            let v = if n.text() == "1" { "True" } else { "False" };
            Site::at(n, vec![Edit::replace(n.span(), v)])
        })
        .collect();
    Candidates::new(sites, "no 1/0 literal in a condition")
}

// -------------------------------------------------------------- GT-3/4 ----

#[derive(Clone, Copy, PartialEq, Eq)]
enum Widening {
    IntToLong,
    IntToDouble,
    FloatToDouble,
}

impl Widening {
    fn target(self) -> &'static str {
        match self {
            Widening::IntToLong => "long",
            _ => "double",
        }
    }

    /// Whether the widened value may still be used where the value is
    /// rendered as text or divided.
    fn integral(self) -> bool {
        self == Widening::IntToLong
    }
}

fn is_string(types: &JavaTypes, n: Node<'_>) -> bool {
    types.of_expr(n).as_deref() == Some("String")
}

/// True if this occurrence of a widened variable is used only where the
/// wider type compiles and yields the same behaviour.
fn java_use_safe(types: &JavaTypes, id: Node<'_>, w: Widening) -> bool {
    let target_rank = java_numeric_rank(w.target()).unwrap_or(0);
    let mut e = id;
    loop {
        let Some(p) = e.parent() else { return false };
        match p.kind() {
            "parenthesized_expression" => e = p,
            "binary_expression" => {
                let op = p.child_by_field("operator").map_or("", |o| o.kind());
                let other = if e.field_name() == Some("left") {
                    p.child_by_field("right")
                } else {
                    p.child_by_field("left")
                };
                match op {
                    "<" | ">" | "<=" | ">=" | "==" | "!=" => return true,
                    "+" if other.is_some_and(|o| is_string(types, o)) => return w.integral(),
                    "+" | "-" | "*" => e = p,
                    "/" | "%" if w != Widening::IntToDouble => e = p,
                    "&" | "|" | "^" | "<<" | ">>" | ">>>" if w.integral() => e = p,
                    _ => return false,
                }
            }
            "unary_expression" => {
                let op = p.child_by_field("operator").map_or("", |o| o.kind());
                match op {
                    "-" | "+" => e = p,
                    "~" if w.integral() => e = p,
                    _ => return false,
                }
            }
            "update_expression" => e = p,
            "expression_statement" | "cast_expression" => return true,
            "for_statement" => return e.field_name() == Some("update"),
            "ternary_expression" => {
                if p.child_by_field("condition") == Some(e) {
                    return false;
                }
                e = p;
            }
            "assignment_expression" => {
                let op = p.child_by_field("operator").map_or("", |o| o.kind());
                if e.field_name() == Some("left") {
                    if op == "=" {
                        return true;
                    }
                    let rhs_integral = p
                        .child_by_field("right")
                        .and_then(|r| types.of_expr(r))
                        .and_then(|t| java_numeric_rank(&t))
                        .is_some_and(|r| r <= 4);
                    return match w {
                        Widening::IntToLong => true,
                        Widening::IntToDouble => matches!(op, "+=" | "-=" | "*=") && rhs_integral,
                        Widening::FloatToDouble => matches!(op, "+=" | "-=" | "*=" | "/="),
                    };
                }
                let left_type = p.child_by_field("left").and_then(|l| types.of_expr(l));
                return match left_type.as_deref() {
                    Some("String") => op == "+=" && w.integral(),
                    Some(t) if op != "=" => java_numeric_rank(t).is_some(),
                    Some(t) => java_numeric_rank(t).is_some_and(|r| r >= target_rank),
                    None => false,
                };
            }
            "variable_declarator" => {
                if p.child_by_field("value") != Some(e) {
                    return false;
                }
                let ty = p
                    .parent()
                    .filter(|d| {
                        d.kind() == "local_variable_declaration" || d.kind() == "field_declaration"
                    })
                    .and_then(|d| d.child_by_field("type"));
                return ty
                    .and_then(|t| java_numeric_rank(t.text()))
                    .is_some_and(|r| r >= target_rank);
            }
            _ => return false,
        }
    }
}

fn java_widen(ctx: &Ctx<'_>, widenings: &[(&str, Widening)]) -> Vec<Site> {
    let types = JavaTypes::collect(ctx.root());
    let mut sites = Vec::new();
    for decl in ctx.nodes_of(&["local_variable_declaration"]) {
        let Some(ty) = decl.child_by_field("type") else {
            continue;
        };
        let Some(&(_, w)) = widenings.iter().find(|(from, _)| *from == ty.text()) else {
            continue;
        };
        let Some(scope) = decl.ancestors().find(|a| {
            matches!(
                a.kind(),
                "method_declaration" | "constructor_declaration" | "program"
            )
        }) else {
            continue;
        };
        let declarators: Vec<Node<'_>> = decl.children_by_field("declarator").collect();
        let ok = !declarators.is_empty()
            && declarators.iter().all(|d| {
                let Some(name) = d.child_by_field("name") else {
                    return false;
                };
                // a name declared twice with different types is not tracked
                types.of_name(name.text()) == Some(ty.text())
                    && d.child_by_field("dimensions").is_none()
                    && scope.descendants().all(|n| {
                        n == name
                            || n.kind() != "identifier"
                            || n.text() != name.text()
                            || (java_is_variable_position(n) && java_use_safe(&types, n, w))
                    })
            });
        if ok {
            sites.push(Site::at(decl, vec![Edit::replace(ty.span(), w.target())]));
        }
    }
    sites
}

/// Python annotations naming exactly `from`.
fn python_annotations(ctx: &Ctx<'_>, from: &str, to: &str) -> Vec<Site> {
    if python_special_names(ctx.root()).contains(to) {
        return Vec::new();
    }
    ctx.nodes_of(&["type"])
        .into_iter()
        .filter(|t| t.text() == from)
        .map(|t| Site::at(t, vec![Edit::replace(t.span(), to)]))
        .collect()
}

pub(super) fn widen_integral(ctx: &Ctx<'_>) -> Candidates {
    if ctx.is_java() {
        Candidates::new(
            java_widen(ctx, &[("int", Widening::IntToLong)]),
            "no int local whose uses all accept long",
        )
    } else {
        Candidates::new(
            python_annotations(ctx, "bool", "int"),
            "no `bool` annotation",
        )
    }
}

pub(super) fn widen_to_floating(ctx: &Ctx<'_>) -> Candidates {
    if ctx.is_java() {
        Candidates::new(
            java_widen(
                ctx,
                &[
                    ("float", Widening::FloatToDouble),
                    ("int", Widening::IntToDouble),
                ],
            ),
            "no int or float local whose uses all accept double",
        )
    } else {
        Candidates::new(
            python_annotations(ctx, "int", "float"),
            "no `int` annotation",
        )
    }
}

// -------------------------------------------------------------- GT-5/6 ----

fn python_name_rebound(ctx: &Ctx<'_>, name: &str) -> bool {
    ctx.nodes_of(&["identifier"])
        .into_iter()
        .any(|n| n.text() == name && python_is_binding(n))
}

/// `import sys` when the snippet lacks it; `Err` when `sys` means
/// something else here.
fn python_sys_import(ctx: &Ctx<'_>) -> Result<Vec<Edit>, &'static str> {
    let imported = ctx.root().named_children().any(|n| {
        n.kind() == "import_statement"
            && n.named_children()
                .any(|c| c.kind() == "dotted_name" && c.text() == "sys")
    });
    if imported {
        return Ok(Vec::new());
    }
    if ctx.name_taken("sys") {
        return Err("`sys` is bound to something other than the sys module");
    }
    import_edit(ctx, "import sys")
        .map(|e| vec![e])
        .ok_or("no place for `import sys`")
}

pub(super) fn change_input_api(ctx: &Ctx<'_>) -> Candidates {
    if python_special_names(ctx.root()).contains("input") || python_name_rebound(ctx, "input") {
        return Candidates::none("`input` is rebound");
    }
    let sites: Vec<Site> = ctx
        .nodes_of(&["call"])
        .into_iter()
        .filter(|c| {
            c.child_by_field("function")
                .is_some_and(|f| f.kind() == "identifier" && f.text() == "input")
                && c.child_by_field("arguments")
                    .is_some_and(|a| a.named_children().all(|x| x.is_comment()))
        })
        .map(|c| {
            Site::at(
                c,
                vec![Edit::replace(
                    c.span(),
                    "sys.stdin.readline().rstrip(\"\\n\")",
                )],
            )
        })
        .collect();
    if sites.is_empty() {
        return Candidates::none("no `input()` call without a prompt");
    }
    match python_sys_import(ctx) {
        Ok(shared) => Candidates::new(sites, "").with_shared(shared),
        Err(reason) => Candidates::none(reason),
    }
}

pub(super) fn change_output_api(ctx: &Ctx<'_>) -> Candidates {
    if ctx.is_java() {
        let types = JavaTypes::collect(ctx.root());
        let mut sites = Vec::new();
        for stmt in ctx.nodes_of(&["expression_statement"]) {
            if !java_print_call(stmt) {
                continue;
            }
            let Some(call) = stmt.named_children().next() else {
                continue;
            };
            if call.child_by_field("name").map(|n| n.text()) != Some("println") {
                continue;
            }
            let (Some(name), Some(args)) = (
                call.child_by_field("name"),
                call.child_by_field("arguments"),
            ) else {
                continue;
            };
            let list: Vec<Node<'_>> = args.named_children().filter(|c| !c.is_comment()).collect();
            let new_args = match list.as_slice() {
                [] => "(\"\\n\")".to_string(),
                [e] => {
                    // println(char[]) prints the characters, concatenation would not
                    if types
                        .of_expr(*e)
                        .is_some_and(|t| t.starts_with("char[") || t == "char[]")
                    {
                        continue;
                    }
                    let inner = strip_parens(*e);
                    let atomic = matches!(
                        inner.kind(),
                        "identifier"
                            | "method_invocation"
                            | "field_access"
                            | "array_access"
                            | "string_literal"
                            | "character_literal"
                    ) || crate::transform::analysis::java_is_literal(inner.kind())
                        || e.kind() == "parenthesized_expression";
                    if atomic {
                        format!("({} + \"\\n\")", e.text())
                    } else {
                        format!("(({}) + \"\\n\")", e.text())
                    }
                }
                _ => continue,
            };
            sites.push(Site::at(
                call,
                vec![
                    Edit::replace(name.span(), "print"),
                    Edit::replace(args.span(), new_args),
                ],
            ));
        }
        return Candidates::new(sites, "no System.out.println call");
    }
    if python_print_rebound(ctx) || python_name_rebound(ctx, "str") {
        return Candidates::none("`print` or `str` is rebound");
    }
    let mut sites = Vec::new();
    for stmt in ctx.nodes_of(&["expression_statement"]) {
        if !python_print_call(stmt) {
            continue;
        }
        let Some(call) = stmt.named_children().find(|c| c.kind() == "call") else {
            continue;
        };
        let Some(args) = call.child_by_field("arguments") else {
            continue;
        };
        if args.kind() != "argument_list" {
            continue;
        }
        let list: Vec<Node<'_>> = args.named_children().filter(|c| !c.is_comment()).collect();
        let text = match list.as_slice() {
            [] => "sys.stdout.write(\"\\n\")".to_string(),
            [e] if !matches!(
                e.kind(),
                "keyword_argument" | "list_splat" | "dictionary_splat" | "parenthesized_list_splat"
            ) =>
            {
                format!("sys.stdout.write(str({}) + \"\\n\")", e.text())
            }
            _ => continue,
        };
        sites.push(Site::at(call, vec![Edit::replace(call.span(), text)]));
    }
    if sites.is_empty() {
        return Candidates::none("no single-argument print call");
    }
    match python_sys_import(ctx) {
        Ok(shared) => Candidates::new(sites, "").with_shared(shared),
        Err(reason) => Candidates::none(reason),
    }
}
