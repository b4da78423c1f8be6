use std::collections::HashSet;

use crate::syntax::{Edit, Node};
use crate::transform::analysis::{
    enclosing_function, function_scope, has_own_continue, java_completes_normally,
    multiline_strings, own_descendants, python_is_binding, python_is_variable_position,
    python_pure, python_special_names, statements, strip_parens,
};
use crate::transform::ctx::{Candidates, Ctx, Site};

const JAVA_BLOCK_LIKE: &[&str] = &["block", "program", "constructor_body"];

fn last_token<'t>(node: Node<'t>, kind: &str) -> Option<Node<'t>> {
    node.children()
        .rev()
        .find(|c| !c.is_named() && c.kind() == kind)
}

// ------------------------------------------------------------------ B-1 ----

pub(super) fn for_to_while(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        for f in ctx.nodes_of(&["for_statement"]) {
            sites.extend(java_for_to_while(ctx, f));
        }
    } else {
        let mut temps = HashSet::new();
        for f in ctx.nodes_of(&["for_statement"]) {
            sites.extend(python_for_to_while(ctx, f, &mut temps));
        }
    }
    Candidates::new(sites, "no for loop with a convertible shape")
}

fn java_for_to_while(ctx: &Ctx<'_>, f: Node<'_>) -> Option<Site> {
    let body = f.child_by_field("body")?;
    let parent = f.parent()?;
    if parent.kind() == "labeled_statement" || has_own_continue(body) {
        return None;
    }
    let inits: Vec<Node<'_>> = f.children_by_field("init").collect();
    let updates: Vec<Node<'_>> = f.children_by_field("update").collect();
    let rparen = last_token(f, ")")?;

    let mut declared = Vec::new();
    for init in &inits {
        if init.kind() == "local_variable_declaration" {
            for d in init.children_by_field("declarator") {
                declared.push(d.child_by_field("name")?.text());
            }
        }
    }
    // variables captured by lambdas or inner classes must stay effectively final
    let captures = body.descendants().any(|d| {
        matches!(d.kind(), "lambda_expression" | "class_body")
            && d.descendants()
                .any(|x| x.kind() == "identifier" && declared.contains(&x.text()))
    });
    if captures {
        return None;
    }

    let init_text = match inits.as_slice() {
        [] => String::new(),
        [one] if one.kind() == "local_variable_declaration" => one.text().to_string(),
        many => many
            .iter()
            .map(|n| format!("{};", n.text()))
            .collect::<Vec<_>>()
            .join(" "),
    };
    let block_like = JAVA_BLOCK_LIKE.contains(&parent.kind());
    let collides = declared.iter().any(|name| {
        parent
            .descendants()
            .any(|d| d.kind() == "identifier" && d.text() == *name && !f.contains(&d))
    });
    let wrap = !inits.is_empty() && (!block_like || collides);
    let cond = f.child_by_field("condition").map_or("true", |c| c.text());

    let sep = if ctx.starts_line(f) {
        format!("\n{}", ctx.indent_of(f))
    } else {
        " ".to_string()
    };
    let header = match (init_text.is_empty(), wrap) {
        (true, _) => format!("while ({cond})"),
        (false, false) => format!("{init_text}{sep}while ({cond})"),
        (false, true) => format!("{{ {init_text}{sep}while ({cond})"),
    };
    let mut edits = vec![Edit::replace(f.start()..rparen.end(), header)];

    let update_text = updates
        .iter()
        .map(|u| format!("{};", u.text()))
        .collect::<Vec<_>>()
        .join(" ");
    if !update_text.is_empty() {
        match body.kind() {
            "block" => {
                if java_completes_normally(body) {
                    let close = last_token(body, "}")?;
                    if ctx.starts_line(close) && close.start_line() > body.start_line() {
                        let indent = format!("{}{}", ctx.indent_of(close), ctx.indent_unit());
                        edits.push(Edit::insert(
                            ctx.tree.line_start(close.start()),
                            format!("{indent}{update_text}\n"),
                        ));
                    } else {
                        edits.push(Edit::insert(close.start(), format!(" {update_text} ")));
                    }
                }
            }
            ";" => edits.push(Edit::replace(body.span(), format!("{{ {update_text} }}"))),
            _ => {
                let tail = if java_completes_normally(body) {
                    format!(" {update_text}")
                } else {
                    String::new()
                };
                edits.push(Edit::replace(
                    body.span(),
                    format!("{{ {}{tail} }}", body.text()),
                ));
            }
        }
    }
    if wrap {
        edits.push(Edit::insert(f.end(), " }"));
    }
    Some(Site::at(f, edits))
}

fn python_range_shadowed(ctx: &Ctx<'_>) -> bool {
    python_special_names(ctx.root()).contains("range")
        || ctx
            .nodes_of(&["identifier"])
            .into_iter()
            .any(|n| n.text() == "range" && python_is_binding(n))
}

fn python_for_to_while(ctx: &Ctx<'_>, f: Node<'_>, temps: &mut HashSet<String>) -> Option<Site> {
    if f.child_by_field("alternative").is_some() || python_range_shadowed(ctx) {
        return None;
    }
    let var = f
        .child_by_field("left")
        .filter(|l| l.kind() == "identifier")?;
    let call = f.child_by_field("right").filter(|r| r.kind() == "call")?;
    let func = call.child_by_field("function")?;
    if func.kind() != "identifier" || func.text() != "range" {
        return None;
    }
    let args: Vec<Node<'_>> = call
        .child_by_field("arguments")?
        .named_children()
        .filter(|c| !c.is_comment())
        .collect();
    if args.is_empty()
        || args.len() > 3
        || args.iter().any(|a| {
            matches!(
                a.kind(),
                "keyword_argument" | "list_splat" | "dictionary_splat"
            )
        })
    {
        return None;
    }
    let body = f.child_by_field("body")?;
    if body.start_line() == f.start_line() || has_own_continue(body) {
        return None;
    }
    let name = var.text();
    let step = match args.get(2) {
        None => 1i64,
        Some(s) => {
            let v = strip_parens(*s);
            let lit: i64 = match v.kind() {
                "integer" => v.text().parse().ok()?,
                "unary_operator" => {
                    let op = v.child_by_field("operator")?.kind();
                    let arg = v.child_by_field("argument")?;
                    if arg.kind() != "integer" {
                        return None;
                    }
                    let n: i64 = arg.text().parse().ok()?;
                    match op {
                        "-" => -n,
                        "+" => n,
                        _ => return None,
                    }
                }
                _ => return None,
            };
            if lit == 0 {
                return None;
            }
            lit
        }
    };
    // the loop variable must be private to the loop: never rebound inside,
    // never read or written outside, never captured
    let mentions = |n: Node<'_>| n.kind() == "identifier" && n.text() == name;
    if body
        .descendants()
        .any(|d| mentions(d) && python_is_binding(d))
        || args.iter().any(|a| a.descendants().any(mentions))
        || body.descendants().any(|d| {
            matches!(
                d.kind(),
                "lambda" | "function_definition" | "class_definition"
            )
        })
        || python_special_names(ctx.root()).contains(name)
    {
        return None;
    }
    let scope = function_scope(ctx.lang(), f);
    if own_descendants(ctx.lang(), scope)
        .into_iter()
        .any(|d| mentions(d) && python_is_variable_position(d) && !f.contains(&d))
    {
        return None;
    }

    let (start, stop) = match args.as_slice() {
        [stop] => ("0".to_string(), *stop),
        [start, stop, ..] => (start.text().to_string(), *stop),
        _ => unreachable!(),
    };
    let stop_stable = match strip_parens(stop).kind() {
        "integer" => true,
        "identifier" => !body
            .descendants()
            .any(|d| d.kind() == "identifier" && d.text() == stop.text() && python_is_binding(d)),
        _ => false,
    };
    let indent = ctx.indent_of(f);
    let cmp = if step > 0 { "<" } else { ">" };
    let mut header = format!("{name} = {start}\n{indent}");
    let bound = if stop_stable {
        stop.text().to_string()
    } else {
        let temp = ctx.fresh_name("limit", temps);
        temps.insert(temp.clone());
        header.push_str(&format!("{temp} = {}\n{indent}", stop.text()));
        temp
    };
    header.push_str(&format!("while {name} {cmp} {bound}:"));
    let colon = f
        .children()
        .find(|c| c.kind() == ":" && c.start() >= call.end())?;
    let first_stmt = body.named_children().find(|c| !c.is_comment())?;
    let body_indent = ctx.indent_of(first_stmt);
    let increment = if step > 0 {
        format!("{name} += {step}")
    } else {
        format!("{name} -= {}", -step)
    };
    let edits = vec![
        Edit::replace(f.start()..colon.end(), header),
        Edit::insert(
            ctx.tree.line_end(body.end()),
            format!("\n{body_indent}{increment}"),
        ),
    ];
    Some(Site::at(f, edits))
}

// ------------------------------------------------------------------ B-2 ----

pub(super) fn while_to_for(ctx: &Ctx<'_>) -> Candidates {
    let sites = ctx
        .nodes_of(&["while_statement"])
        .into_iter()
        .filter_map(|w| {
            let cond = w.child_by_field("condition")?;
            let inner = strip_parens_text(cond);
            Some(Site::at(
                w,
                vec![Edit::replace(
                    w.start()..cond.end(),
                    format!("for (;{inner};)"),
                )],
            ))
        })
        .collect();
    Candidates::new(sites, "no while loop")
}

/// Text of a parenthesized condition without its outer parentheses.
fn strip_parens_text(cond: Node<'_>) -> &str {
    if cond.kind() == "parenthesized_expression" {
        let t = cond.text();
        &t[1..t.len() - 1]
    } else {
        cond.text()
    }
}

// -------------------------------------------------------------- B-3/B-4 ----

/// An if statement without an else may not move into a position where a
/// following `else` would attach to it.
fn java_dangling_safe(outer_if: Node<'_>) -> bool {
    let mut top = outer_if;
    while let Some(p) = top.parent() {
        if p.kind() == "if_statement" && top.field_name() == Some("alternative") {
            top = p;
        } else {
            break;
        }
    }
    top.parent().is_some_and(|p| {
        JAVA_BLOCK_LIKE.contains(&p.kind()) || p.kind() == "switch_block_statement_group"
    })
}

pub(super) fn merge_else_if(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        for s in ctx.nodes_of(&["if_statement"]) {
            let Some(block) = s
                .child_by_field("alternative")
                .filter(|a| a.kind() == "block")
            else {
                continue;
            };
            if block.children().any(|c| c.is_comment()) {
                continue;
            }
            let stmts = statements(ctx.lang(), block);
            let [inner] = stmts.as_slice() else { continue };
            if inner.kind() != "if_statement" {
                continue;
            }
            if inner.child_by_field("alternative").is_none() && !java_dangling_safe(s) {
                continue;
            }
            let glue = if ctx.src()[..block.start()].ends_with(char::is_whitespace) {
                ""
            } else {
                " "
            };
            sites.push(Site::at(
                block,
                vec![
                    Edit::replace(block.start()..inner.start(), glue),
                    Edit::delete(inner.end()..block.end()),
                ],
            ));
        }
    } else {
        for clause in ctx.nodes_of(&["else_clause"]) {
            if clause.parent().is_none_or(|p| p.kind() != "if_statement") {
                continue;
            }
            let Some(body) = clause.child_by_field("body") else {
                continue;
            };
            let stmts = statements(ctx.lang(), body);
            let [inner] = stmts.as_slice() else { continue };
            if inner.kind() != "if_statement"
                || !ctx.starts_line(*inner)
                || multiline_strings(*inner)
                || clause
                    .descendants()
                    .any(|d| d.is_comment() && !inner.contains(&d))
            {
                continue;
            }
            let text = ctx.reindent(inner.text(), ctx.indent_of(*inner), ctx.indent_of(clause));
            sites.push(Site::at(
                clause,
                vec![Edit::replace(clause.span(), format!("el{text}"))],
            ));
        }
    }
    Candidates::new(sites, "no else branch holding only an if statement")
}

pub(super) fn split_else_if(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    if ctx.is_java() {
        // One site per chain, rooted at the first `if` that is not itself an
        // `else if`.
        for s in ctx.nodes_of(&["if_statement"]) {
            if s.field_name() == Some("alternative") {
                continue;
            }
            let mut edits = Vec::new();
            let mut cur = s;
            while let Some(alt) = cur
                .child_by_field("alternative")
                .filter(|a| a.kind() == "if_statement")
            {
                edits.push(Edit::insert(alt.start(), "{ "));
                cur = alt;
            }
            if edits.is_empty() {
                continue;
            }
            edits.push(Edit::insert(s.end(), " }".repeat(edits.len())));
            sites.push(Site::at(s, edits));
        }
    } else {
        for stmt in ctx.nodes_of(&["if_statement"]) {
            let clauses: Vec<Node<'_>> = stmt
                .children()
                .filter(|c| matches!(c.kind(), "elif_clause" | "else_clause"))
                .collect();
            let Some(first) = clauses.first().filter(|c| c.kind() == "elif_clause") else {
                continue;
            };
            if !clauses.iter().all(|c| ctx.starts_line(*c)) || multiline_strings(stmt) {
                continue;
            }
            let gaps_blank = clauses
                .windows(2)
                .all(|w| ctx.text(w[0].end()..w[1].start()).trim().is_empty());
            if !gaps_blank {
                continue;
            }
            let outer = ctx.indent_of(*first);
            let unit = ctx.indent_unit();
            let mut out = String::new();
            let mut indent = outer.to_string();
            for (i, c) in clauses.iter().enumerate() {
                let text = ctx.text(c.span());
                if c.kind() == "elif_clause" {
                    indent.push_str(&unit);
                    if i > 0 {
                        out.push('\n');
                        out.push_str(&indent[..indent.len() - unit.len()]);
                    }
                    let body = ctx.reindent(&text["elif".len()..], outer, &indent);
                    out.push_str(&format!("else:\n{indent}if{body}"));
                } else {
                    out.push('\n');
                    out.push_str(&indent);
                    out.push_str(&ctx.reindent(text, outer, &indent));
                }
            }
            sites.push(Site::new(
                first.span(),
                vec![Edit::replace(first.start()..stmt.end(), out)],
            ));
        }
    }
    Candidates::new(sites, "no else-if chain")
}

// ------------------------------------------------------------------ B-5 ----

pub(super) fn swap_if_else(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for s in ctx.nodes_of(&["if_statement"]) {
        let Some(cond) = s.child_by_field("condition") else {
            continue;
        };
        let Some(cons) = s.child_by_field("consequence") else {
            continue;
        };
        if ctx.is_java() {
            let Some(alt) = s.child_by_field("alternative") else {
                continue;
            };
            if alt.kind() == "if_statement" {
                continue;
            }
            let moved_alt = if alt.kind() == "block" {
                alt.text().to_string()
            } else {
                format!("{{ {} }}", alt.text())
            };
            sites.push(Site::at(
                s,
                vec![
                    Edit::replace(cond.span(), format!("(!{})", cond.text())),
                    Edit::replace(cons.span(), moved_alt),
                    Edit::replace(alt.span(), cons.text()),
                ],
            ));
        } else {
            let alts: Vec<Node<'_>> = s.children_by_field("alternative").collect();
            let [else_clause] = alts.as_slice() else {
                continue;
            };
            if else_clause.kind() != "else_clause" {
                continue;
            }
            let Some(alt) = else_clause.child_by_field("body") else {
                continue;
            };
            let own_lines = ctx.starts_line(cons)
                && ctx.starts_line(alt)
                && cons.start_line() > cond.end_line()
                && ctx.indent_of(cons) == ctx.indent_of(alt);
            if !own_lines {
                continue;
            }
            sites.push(Site::at(
                s,
                vec![
                    Edit::replace(cond.span(), format!("not ({})", cond.text())),
                    Edit::replace(cons.span(), alt.text()),
                    Edit::replace(alt.span(), cons.text()),
                ],
            ));
        }
    }
    Candidates::new(sites, "no if statement with an else branch")
}

// ------------------------------------------------------------------ B-6 ----

pub(super) fn split_and_condition(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    for s in ctx.nodes_of(&["if_statement"]) {
        if s.child_by_field("alternative").is_some() {
            continue;
        }
        let Some(cond) = s.child_by_field("condition") else {
            continue;
        };
        let Some(cons) = s.child_by_field("consequence") else {
            continue;
        };
        let expr = strip_parens(cond);
        let (and_kind, op_kind) = if ctx.is_java() {
            ("binary_expression", "&&")
        } else {
            ("boolean_operator", "and")
        };
        if expr.kind() != and_kind
            || expr.child_by_field("operator").map(|o| o.kind()) != Some(op_kind)
        {
            continue;
        }
        let (Some(a), Some(b)) = (expr.child_by_field("left"), expr.child_by_field("right")) else {
            continue;
        };
        if ctx.is_java() {
            sites.push(Site::at(
                s,
                vec![
                    Edit::replace(cond.span(), format!("({})", a.text())),
                    Edit::insert(cons.start(), format!("{{ if ({}) ", b.text())),
                    Edit::insert(cons.end(), " }"),
                ],
            ));
        } else {
            if multiline_strings(cons) {
                continue;
            }
            let part = |n: Node<'_>| {
                if n.text().contains('\n') {
                    format!("({})", n.text())
                } else {
                    n.text().to_string()
                }
            };
            let Some(colon) = s
                .children()
                .find(|c| c.kind() == ":" && c.start() >= cond.end())
            else {
                continue;
            };
            let indent = ctx.indent_of(s);
            let inner = format!("{indent}{}", ctx.indent_unit());
            let tail = ctx.reindent(ctx.text(colon.start()..s.end()), indent, &inner);
            sites.push(Site::at(
                s,
                vec![Edit::replace(
                    s.span(),
                    format!("if {}:\n{inner}if {}{tail}", part(a), part(b)),
                )],
            ));
        }
    }
    Candidates::new(
        sites,
        "no if statement whose condition is a top-level AND without else",
    )
}

// ------------------------------------------------------------------ B-7 ----

pub(super) fn extract_function(ctx: &Ctx<'_>) -> Candidates {
    let mut sites = Vec::new();
    let mut used = HashSet::new();
    let special = python_special_names(ctx.root());
    for stmt in ctx.nodes_of(&["expression_statement"]) {
        let Some(assign) = stmt
            .named_children()
            .next()
            .filter(|a| a.kind() == "assignment")
        else {
            continue;
        };
        if stmt.named_children().count() != 1 || !ctx.starts_line(stmt) {
            continue;
        }
        let (Some(left), Some(right)) = (
            assign.child_by_field("left"),
            assign.child_by_field("right"),
        ) else {
            continue;
        };
        if left.kind() != "identifier" || !python_pure(right, false) {
            continue;
        }
        let core = strip_parens(right);
        if !matches!(
            core.kind(),
            "binary_operator"
                | "unary_operator"
                | "boolean_operator"
                | "not_operator"
                | "comparison_operator"
        ) || right.text().contains('\n')
        {
            continue;
        }
        let in_class = stmt
            .ancestors()
            .find(|a| matches!(a.kind(), "function_definition" | "class_definition"))
            .is_some_and(|a| a.kind() == "class_definition");
        if in_class {
            continue;
        }
        let mut params: Vec<&str> = Vec::new();
        for d in right.descendants() {
            if d.kind() == "identifier" && !params.contains(&d.text()) {
                params.push(d.text());
            }
        }
        if params.iter().any(|p| special.contains(*p))
            && enclosing_function(ctx.lang(), stmt).is_none()
        {
            continue;
        }
        let name = ctx.fresh_name("func", &used);
        used.insert(name.clone());
        let args = params.join(", ");
        let unit = ctx.indent_unit();
        let def = format!("def {name}({args}):\n{unit}return {}", right.text());
        sites.push(Site::at(
            stmt,
            vec![
                ctx.insert_before(stmt, &def),
                Edit::replace(right.span(), format!("{name}({args})")),
            ],
        ));
    }
    Candidates::new(sites, "no variable initialized from a pure expression")
}
