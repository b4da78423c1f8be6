use std::collections::{BTreeMap, HashMap, HashSet};

use crate::syntax::{Edit, Node};
use crate::transform::analysis::{
    java_is_variable_position, java_locals, own_descendants, python_is_binding,
    python_is_variable_position, python_special_names, python_uses_dynamic_scope, JavaTypes,
    PYTHON_BUILTINS,
};
use crate::transform::ctx::{Candidates, Ctx, Site};

/// Renames every listed occurrence, one site per original name. `order` is
/// the first-declaration order of the names.
fn rename_sites(
    ctx: &Ctx<'_>,
    base: &str,
    order: &[String],
    occurrences: &BTreeMap<String, Vec<Node<'_>>>,
    taken: &mut HashSet<String>,
) -> Vec<Site> {
    let mut sites = Vec::new();
    for name in order {
        let Some(nodes) = occurrences.get(name) else {
            continue;
        };
        let placeholder = (1..)
            .map(|k| format!("{base}{k}"))
            .find(|p| !ctx.name_taken(p) && !taken.contains(p))
            .expect("unbounded search");
        taken.insert(placeholder.clone());
        let mut spans: Vec<_> = nodes.iter().map(|n| n.span()).collect();
        spans.sort_by_key(|s| s.start);
        spans.dedup();
        let anchor = spans[0].start..spans[spans.len() - 1].end;
        let edits = spans
            .into_iter()
            .map(|s| Edit::replace(s, placeholder.clone()))
            .collect();
        sites.push(Site::new(anchor, edits));
    }
    sites
}

fn push_unique(order: &mut Vec<String>, name: &str) {
    if !order.iter().any(|n| n == name) {
        order.push(name.to_string());
    }
}

// ------------------------------------------------------------------ I-1 ----

/// Methods that commonly implement library interfaces or override
/// `Object`; renaming them would break dispatch from outside the snippet.
const JAVA_DISPATCHED: &[&str] = &[
    "main",
    "toString",
    "equals",
    "hashCode",
    "compareTo",
    "compare",
    "clone",
    "finalize",
    "run",
    "call",
    "get",
    "apply",
    "accept",
    "test",
    "close",
    "iterator",
    "hasNext",
    "next",
    "remove",
    "size",
    "isEmpty",
    "contains",
    "length",
    "charAt",
    "subSequence",
    "read",
    "write",
    "flush",
    "getMessage",
    "handle",
    "invoke",
    "execute",
    "onCreate",
    "actionPerformed",
];

pub(super) fn rename_functions(ctx: &Ctx<'_>) -> Candidates {
    let (funcs, classes) = if ctx.is_java() {
        java_function_names(ctx)
    } else {
        python_function_names(ctx)
    };
    let mut taken = HashSet::new();
    let mut sites = rename_sites(ctx, "func", &funcs.0, &funcs.1, &mut taken);
    sites.extend(rename_sites(
        ctx, "class", &classes.0, &classes.1, &mut taken,
    ));
    Candidates::new(
        sites,
        "no function or class defined in the snippet can be renamed safely",
    )
}

type Renames<'t> = (Vec<String>, BTreeMap<String, Vec<Node<'t>>>);

fn java_function_names<'t>(ctx: &Ctx<'t>) -> (Renames<'t>, Renames<'t>) {
    let mut fn_order = Vec::new();
    let mut fn_occ: BTreeMap<String, Vec<Node<'t>>> = BTreeMap::new();
    let mut blocked: HashSet<&str> = HashSet::new();
    for m in ctx.nodes_of(&["method_declaration"]) {
        let Some(name) = m.child_by_field("name") else {
            continue;
        };
        let annotated = m
            .child_of_kind("modifiers")
            .is_some_and(|mods| mods.children().any(|c| c.kind().ends_with("annotation")));
        if annotated || JAVA_DISPATCHED.contains(&name.text()) {
            blocked.insert(name.text());
            continue;
        }
        push_unique(&mut fn_order, name.text());
        fn_occ
            .entry(name.text().to_string())
            .or_default()
            .push(name);
    }
    for call in ctx.nodes_of(&["method_invocation"]) {
        let Some(name) = call.child_by_field("name") else {
            continue;
        };
        if !fn_occ.contains_key(name.text()) {
            continue;
        }
        match call.child_by_field("object") {
            None => fn_occ.get_mut(name.text()).unwrap().push(name),
            Some(o) if o.kind() == "this" => fn_occ.get_mut(name.text()).unwrap().push(name),
            Some(_) => {
                blocked.insert(name.text());
            }
        }
    }
    for r in ctx.nodes_of(&["method_reference"]) {
        let parts: Vec<Node<'_>> = r.named_children().collect();
        if let [obj, name] = parts.as_slice() {
            if name.kind() == "identifier" && fn_occ.contains_key(name.text()) {
                if obj.kind() == "this" {
                    fn_occ.get_mut(name.text()).unwrap().push(*name);
                } else {
                    blocked.insert(name.text());
                }
            }
        }
    }
    fn_order.retain(|n| !blocked.contains(n.as_str()));

    let types = JavaTypes::collect(ctx.root());
    let method_names: HashSet<&str> = ctx
        .nodes_of(&["method_declaration", "method_invocation"])
        .into_iter()
        .filter_map(|m| m.child_by_field("name"))
        .map(|n| n.text())
        .collect();
    let mut cls_order = Vec::new();
    let mut cls_occ: BTreeMap<String, Vec<Node<'t>>> = BTreeMap::new();
    for c in ctx.nodes_of(&[
        "class_declaration",
        "interface_declaration",
        "enum_declaration",
        "record_declaration",
    ]) {
        let Some(name) = c.child_by_field("name") else {
            continue;
        };
        let public = c
            .child_of_kind("modifiers")
            .is_some_and(|m| m.children().any(|k| k.kind() == "public"));
        let text = name.text();
        if public || types.is_declared(text) || method_names.contains(text) {
            continue;
        }
        push_unique(&mut cls_order, text);
        let occ = ctx
            .tree
            .nodes()
            .filter(|n| matches!(n.kind(), "identifier" | "type_identifier") && n.text() == text)
            .collect();
        cls_occ.insert(text.to_string(), occ);
    }
    ((fn_order, fn_occ), (cls_order, cls_occ))
}

fn python_function_names<'t>(ctx: &Ctx<'t>) -> (Renames<'t>, Renames<'t>) {
    let special = python_special_names(ctx.root());
    let idents = ctx.nodes_of(&["identifier"]);
    let params: HashSet<&str> = idents
        .iter()
        .filter(|n| {
            python_is_binding(**n)
                && n.ancestors()
                    .any(|a| matches!(a.kind(), "parameters" | "lambda_parameters"))
        })
        .map(|n| n.text())
        .collect();
    let keywords: HashSet<&str> = ctx
        .nodes_of(&["keyword_argument"])
        .into_iter()
        .filter_map(|k| k.child_by_field("name"))
        .map(|n| n.text())
        .collect();
    let mut defined: HashMap<&str, usize> = HashMap::new();
    for def in ctx.nodes_of(&["function_definition", "class_definition"]) {
        if let Some(name) = def.child_by_field("name") {
            *defined.entry(name.text()).or_default() += 1;
        }
    }
    let mut out: [Renames<'t>; 2] = Default::default();
    for def in ctx.nodes_of(&["function_definition", "class_definition"]) {
        let Some(name) = def.child_by_field("name") else {
            continue;
        };
        let text = name.text();
        let is_class = def.kind() == "class_definition";
        let outer = def
            .parent()
            .filter(|p| p.kind() == "decorated_definition")
            .unwrap_or(def);
        let in_class = outer
            .parent()
            .and_then(|b| b.parent())
            .filter(|c| c.kind() == "class_definition");
        let rebound = idents.iter().any(|n| {
            n.text() == text
                && python_is_binding(*n)
                && n.parent()
                    .is_none_or(|p| !matches!(p.kind(), "function_definition" | "class_definition"))
        });
        if text.starts_with("__") && text.ends_with("__")
            || special.contains(text)
            || PYTHON_BUILTINS.contains(&text)
            || params.contains(text)
            || keywords.contains(text)
            || rebound
            || defined[text] > 1
        {
            continue;
        }
        let mut occ = vec![name];
        match in_class {
            Some(cls) => {
                // methods: only classes without bases, reached through self/cls
                if is_class || cls.child_by_field("superclasses").is_some() {
                    continue;
                }
                let mut ok = true;
                for a in ctx.nodes_of(&["attribute"]) {
                    let Some(attr) = a.child_by_field("attribute") else {
                        continue;
                    };
                    if attr.text() != text {
                        continue;
                    }
                    let obj = a.child_by_field("object").map_or("", |o| o.text());
                    if matches!(obj, "self" | "cls") {
                        occ.push(attr);
                    } else {
                        ok = false;
                    }
                }
                let bare = idents
                    .iter()
                    .any(|n| n.text() == text && *n != name && python_is_variable_position(*n));
                if !ok || bare {
                    continue;
                }
            }
            None => {
                let attr_use = ctx.nodes_of(&["attribute"]).into_iter().any(|a| {
                    a.child_by_field("attribute")
                        .is_some_and(|x| x.text() == text)
                });
                if attr_use {
                    continue;
                }
                occ.extend(idents.iter().filter(|n| {
                    n.text() == text && **n != name && python_is_variable_position(**n)
                }));
            }
        }
        let slot = &mut out[usize::from(is_class)];
        push_unique(&mut slot.0, text);
        slot.1.insert(text.to_string(), occ);
    }
    let [funcs, classes] = out;
    (funcs, classes)
}

// ------------------------------------------------------------------ I-2 ----

pub(super) fn rename_variables(ctx: &Ctx<'_>) -> Candidates {
    let (order, occ) = if ctx.is_java() {
        java_variables(ctx)
    } else {
        python_variables(ctx)
    };
    let mut taken = HashSet::new();
    let sites = rename_sites(ctx, "var", &order, &occ, &mut taken);
    Candidates::new(
        sites,
        "no local variable or parameter can be renamed safely",
    )
}

fn java_variables<'t>(ctx: &Ctx<'t>) -> Renames<'t> {
    let mut order = Vec::new();
    let mut occ: BTreeMap<String, Vec<Node<'t>>> = BTreeMap::new();
    let mut blocked: HashSet<String> = HashSet::new();
    let mut funcs = ctx.nodes_of(&["method_declaration", "constructor_declaration"]);
    // methods of local and anonymous classes are handled with their outer method
    funcs.retain(|f| {
        !f.ancestors()
            .any(|a| matches!(a.kind(), "method_declaration" | "constructor_declaration"))
    });
    let mut locals_all = Vec::new();
    for func in funcs {
        let locals = java_locals(func);
        // names declared inside nested class bodies would need their own scopes
        for n in func.descendants() {
            let nested = n
                .ancestors()
                .take_while(|a| *a != func)
                .any(|a| a.kind() == "class_body");
            if nested && matches!(n.kind(), "variable_declarator" | "formal_parameter") {
                if let Some(name) = n.child_by_field("name") {
                    blocked.insert(name.text().to_string());
                }
            }
        }
        for id in func.descendants().filter(|n| java_is_variable_position(*n)) {
            let owner = locals
                .iter()
                .filter(|l| l.name.text() == id.text() && l.scope.contains(&id.start()))
                .max_by_key(|l| l.scope.start);
            if let Some(l) = owner {
                occ.entry(l.name.text().to_string()).or_default().push(id);
            }
        }
        locals_all.extend(locals);
    }
    locals_all.sort_by_key(|l| l.name.start());
    for l in &locals_all {
        if l.name.text() != "_" && !blocked.contains(l.name.text()) {
            push_unique(&mut order, l.name.text());
        }
    }
    // declaring occurrences are normally found above; add any that were not
    for l in &locals_all {
        let v = occ.entry(l.name.text().to_string()).or_default();
        if !v.contains(&l.name) {
            v.push(l.name);
        }
    }
    (order, occ)
}

const COMPREHENSIONS: &[&str] = &[
    "list_comprehension",
    "set_comprehension",
    "dictionary_comprehension",
    "generator_expression",
];

fn python_variables<'t>(ctx: &Ctx<'t>) -> Renames<'t> {
    let special = python_special_names(ctx.root());
    let keywords: HashSet<&str> = ctx
        .nodes_of(&["keyword_argument"])
        .into_iter()
        .filter_map(|k| k.child_by_field("name"))
        .map(|n| n.text())
        .collect();
    let excluded = |name: &str| {
        special.contains(name)
            || keywords.contains(name)
            || PYTHON_BUILTINS.contains(&name)
            || matches!(name, "self" | "cls" | "_")
            || (name.starts_with("__") && name.ends_with("__"))
    };

    let mut scopes = ctx.nodes_of(&["function_definition"]);
    scopes.push(ctx.root());
    let mut order: Vec<(usize, String)> = Vec::new();
    let mut occ: BTreeMap<String, Vec<Node<'t>>> = BTreeMap::new();
    for scope in scopes {
        let is_module = scope == ctx.root();
        if python_uses_dynamic_scope(scope) {
            continue;
        }
        let own = own_descendants(ctx.lang(), scope);
        let own_set: HashSet<_> = own.iter().map(|n| n.id()).collect();
        // bindings made by this scope itself; a def/class name belongs to I-1
        let mut bound: HashMap<&str, Node<'t>> = HashMap::new();
        let mut comp_only: HashMap<&str, bool> = HashMap::new();
        for n in &own {
            if n.kind() != "identifier" || !python_is_binding(*n) {
                continue;
            }
            if n.parent()
                .is_some_and(|p| matches!(p.kind(), "function_definition" | "class_definition"))
                && n.field_name() == Some("name")
            {
                continue;
            }
            let in_comp = n
                .ancestors()
                .take_while(|a| *a != scope)
                .any(|a| COMPREHENSIONS.contains(&a.kind()));
            bound.entry(n.text()).or_insert(*n);
            let e = comp_only.entry(n.text()).or_insert(true);
            *e &= in_comp;
        }
        // parameters of this function live in its `parameters` child, which
        // `own_descendants` includes; default values belong to the outer scope
        for (name, first) in bound {
            if excluded(name) {
                continue;
            }
            let all: Vec<Node<'t>> = scope
                .descendants()
                .filter(|n| {
                    n.kind() == "identifier" && n.text() == name && python_is_variable_position(*n)
                })
                .collect();
            let in_default = all.iter().any(|n| {
                !python_is_binding(*n)
                    && n.ancestors()
                        .take_while(|a| *a != scope)
                        .any(|a| a.kind() == "parameters")
            });
            // rebinding inside a nested function, lambda or class makes a second variable
            let nested_binding = all
                .iter()
                .any(|n| !own_set.contains(&n.id()) && python_is_binding(*n));
            let comp_leak = comp_only.get(name).copied().unwrap_or(false)
                && all.iter().any(|n| {
                    !n.ancestors()
                        .take_while(|a| *a != scope)
                        .any(|a| COMPREHENSIONS.contains(&a.kind()))
                });
            if in_default || nested_binding || comp_leak {
                continue;
            }
            if is_module {
                // module names are renamed only when no function binds them
                let bound_elsewhere = ctx.nodes_of(&["identifier"]).into_iter().any(|n| {
                    n.text() == name && python_is_binding(n) && !own_set.contains(&n.id())
                });
                if bound_elsewhere {
                    continue;
                }
            }
            // the same name in two scopes shares one placeholder
            occ.entry(name.to_string()).or_default().extend(all);
            order.push((first.start(), name.to_string()));
        }
    }
    order.sort();
    let mut names = Vec::new();
    for (_, n) in order {
        push_unique(&mut names, &n);
    }
    (names, occ)
}
