//! Syntactic facts shared by several strategies: statement kinds, purity of
//! expressions, declared types and variable references.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use crate::syntax::{Language, Node};

pub(crate) const JAVA_STATEMENTS: &[&str] = &[
    "local_variable_declaration",
    "expression_statement",
    "if_statement",
    "for_statement",
    "enhanced_for_statement",
    "while_statement",
    "do_statement",
    "return_statement",
    "break_statement",
    "continue_statement",
    "throw_statement",
    "try_statement",
    "try_with_resources_statement",
    "switch_expression",
    "synchronized_statement",
    "labeled_statement",
    "block",
    "assert_statement",
    "yield_statement",
    "local_class_declaration",
    "class_declaration",
    ";",
];

pub(crate) const PYTHON_STATEMENTS: &[&str] = &[
    "expression_statement",
    "if_statement",
    "for_statement",
    "while_statement",
    "return_statement",
    "pass_statement",
    "break_statement",
    "continue_statement",
    "raise_statement",
    "try_statement",
    "with_statement",
    "function_definition",
    "class_definition",
    "decorated_definition",
    "import_statement",
    "import_from_statement",
    "future_import_statement",
    "global_statement",
    "nonlocal_statement",
    "delete_statement",
    "assert_statement",
    "print_statement",
    "exec_statement",
    "match_statement",
    "type_alias_statement",
];

pub(crate) fn is_statement(lang: Language, node: Node<'_>) -> bool {
    match lang {
        Language::Java => node.is_named() && JAVA_STATEMENTS.contains(&node.kind()),
        Language::Python => PYTHON_STATEMENTS.contains(&node.kind()),
    }
}

/// Statements directly inside a block-like node (comments excluded).
pub(crate) fn statements<'t>(lang: Language, block: Node<'t>) -> Vec<Node<'t>> {
    block
        .children()
        .filter(|c| !c.is_comment() && is_statement(lang, *c))
        .collect()
}

pub(crate) fn enclosing_function<'t>(lang: Language, node: Node<'t>) -> Option<Node<'t>> {
    let kinds: &[&str] = match lang {
        Language::Java => &[
            "method_declaration",
            "constructor_declaration",
            "compact_constructor_declaration",
            "lambda_expression",
            "static_initializer",
        ],
        Language::Python => &["function_definition", "lambda"],
    };
    node.ancestors().find(|a| kinds.contains(&a.kind()))
}

/// The body block of the function enclosing `node`, or the root when the
/// snippet is a bare statement list.
pub(crate) fn function_scope<'t>(lang: Language, node: Node<'t>) -> Node<'t> {
    match enclosing_function(lang, node) {
        Some(f) => f,
        None => node.ancestors().last().unwrap_or(node),
    }
}

/// Descendants of `scope` that do not lie inside a nested function or class.
pub(crate) fn own_descendants<'t>(lang: Language, scope: Node<'t>) -> Vec<Node<'t>> {
    let nested: &[&str] = match lang {
        Language::Java => &[
            "method_declaration",
            "constructor_declaration",
            "lambda_expression",
            "class_body",
        ],
        Language::Python => &["function_definition", "lambda", "class_definition"],
    };
    let mut out = Vec::new();
    let mut stack = vec![scope];
    while let Some(n) = stack.pop() {
        out.push(n);
        for c in n.children().rev() {
            if c != scope && nested.contains(&c.kind()) {
                continue;
            }
            stack.push(c);
        }
    }
    out
}

pub(crate) fn strip_parens(node: Node<'_>) -> Node<'_> {
    let mut n = node;
    while n.kind() == "parenthesized_expression" {
        match n.named_children().find(|c| !c.is_comment()) {
            Some(inner) => n = inner,
            None => break,
        }
    }
    n
}

// ---------------------------------------------------------------- Java ----

pub(crate) fn java_is_literal(kind: &str) -> bool {
    matches!(
        kind,
        "decimal_integer_literal"
            | "hex_integer_literal"
            | "octal_integer_literal"
            | "binary_integer_literal"
            | "decimal_floating_point_literal"
            | "hex_floating_point_literal"
            | "true"
            | "false"
            | "character_literal"
            | "string_literal"
            | "null_literal"
    )
}

/// Java numeric types ordered by widening.
pub(crate) fn java_numeric_rank(ty: &str) -> Option<u8> {
    Some(match ty {
        "byte" => 1,
        "short" => 2,
        "char" => 2,
        "int" => 3,
        "long" => 4,
        "float" => 5,
        "double" => 6,
        _ => return None,
    })
}

pub(crate) fn java_literal_type(node: Node<'_>) -> Option<&'static str> {
    let text = node.text();
    Some(match node.kind() {
        "decimal_integer_literal"
        | "hex_integer_literal"
        | "octal_integer_literal"
        | "binary_integer_literal" => {
            if text.ends_with(['l', 'L']) {
                "long"
            } else {
                "int"
            }
        }
        "decimal_floating_point_literal" | "hex_floating_point_literal" => {
            if text.ends_with(['f', 'F']) {
                "float"
            } else {
                "double"
            }
        }
        "true" | "false" => "boolean",
        "character_literal" => "char",
        "string_literal" => "String",
        _ => return None,
    })
}

/// Declared types of names in a Java snippet. A name declared more than once
/// with different types maps to `None`.
pub(crate) struct JavaTypes {
    types: HashMap<String, Option<String>>,
}

impl JavaTypes {
    pub fn collect(root: Node<'_>) -> Self {
        let mut types: HashMap<String, Option<String>> = HashMap::new();
        let mut record = |name: &str, ty: String| {
            types
                .entry(name.to_string())
                .and_modify(|t| {
                    if t.as_deref() != Some(ty.as_str()) {
                        *t = None;
                    }
                })
                .or_insert(Some(ty));
        };
        for n in root.descendants() {
            match n.kind() {
                "local_variable_declaration" | "field_declaration" => {
                    let Some(ty) = n.child_by_field("type") else {
                        continue;
                    };
                    for d in n.children_by_field("declarator") {
                        if let Some(name) = d.child_by_field("name") {
                            let dims = d.child_by_field("dimensions").map_or("", |x| x.text());
                            record(name.text(), format!("{}{}", ty.text(), dims));
                        }
                    }
                }
                "formal_parameter"
                | "catch_formal_parameter"
                | "enhanced_for_statement"
                | "resource" => {
                    let ty = n
                        .child_by_field("type")
                        .or_else(|| n.child_of_kind("catch_type"));
                    if let (Some(ty), Some(name)) = (ty, n.child_by_field("name")) {
                        let dims = n.child_by_field("dimensions").map_or("", |x| x.text());
                        record(name.text(), format!("{}{}", ty.text(), dims));
                    }
                }
                "spread_parameter" => {
                    if let Some(d) = n.child_of_kind("variable_declarator") {
                        if let Some(name) = d.child_by_field("name") {
                            record(name.text(), "varargs".into());
                        }
                    }
                }
                "inferred_parameters" => {
                    for id in n.named_children() {
                        record(id.text(), "?".into());
                    }
                }
                "lambda_expression" => {
                    if let Some(p) = n.child_by_field("parameters") {
                        if p.kind() == "identifier" {
                            record(p.text(), "?".into());
                        }
                    }
                }
                _ => {}
            }
        }
        JavaTypes { types }
    }

    pub fn of_name(&self, name: &str) -> Option<&str> {
        self.types.get(name).and_then(|t| t.as_deref())
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.types.contains_key(name)
    }

    /// Static type of an expression when it can be read off the snippet.
    pub fn of_expr(&self, node: Node<'_>) -> Option<String> {
        let node = strip_parens(node);
        match node.kind() {
            "identifier" => self.of_name(node.text()).map(str::to_owned),
            "field_access" => {
                let obj = node.child_by_field("object")?;
                if obj.kind() == "this" {
                    self.of_name(node.child_by_field("field")?.text())
                        .map(str::to_owned)
                } else {
                    None
                }
            }
            "cast_expression" => node.child_by_field("type").map(|t| t.text().to_string()),
            "binary_expression" => {
                let op = node.child_by_field("operator")?.kind();
                match op {
                    "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" => Some("boolean".into()),
                    _ => {
                        let l = self.of_expr(node.child_by_field("left")?)?;
                        let r = self.of_expr(node.child_by_field("right")?)?;
                        if l == "String" || r == "String" {
                            return (op == "+").then(|| "String".into());
                        }
                        let (lr, rr) = (java_numeric_rank(&l)?, java_numeric_rank(&r)?);
                        let wide = if lr >= rr { l } else { r };
                        if matches!(op, "<<" | ">>" | ">>>") {
                            return None;
                        }
                        Some(if java_numeric_rank(&wide)? < 3 {
                            "int".into()
                        } else {
                            wide
                        })
                    }
                }
            }
            "unary_expression" => {
                let op = node.child_by_field("operator")?.kind();
                if op == "!" {
                    return Some("boolean".into());
                }
                let t = self.of_expr(node.child_by_field("operand")?)?;
                java_numeric_rank(&t)?;
                Some(if java_numeric_rank(&t)? < 3 {
                    "int".into()
                } else {
                    t
                })
            }
            k if java_is_literal(k) => java_literal_type(node).map(str::to_owned),
            _ => None,
        }
    }
}

/// Whether an identifier node stands for a variable (declaration or use),
/// as opposed to a method, label, type, package or member name.
pub(crate) fn java_is_variable_position(id: Node<'_>) -> bool {
    if id.kind() != "identifier" {
        return false;
    }
    let Some(parent) = id.parent() else {
        return true;
    };
    let field = id.field_name();
    match parent.kind() {
        "method_invocation" => field != Some("name"),
        "field_access" => field != Some("field"),
        "method_declaration"
        | "constructor_declaration"
        | "class_declaration"
        | "interface_declaration"
        | "enum_declaration"
        | "record_declaration"
        | "annotation_type_declaration"
        | "enum_constant" => field != Some("name"),
        "labeled_statement" | "break_statement" | "continue_statement" => false,
        "marker_annotation" | "annotation" | "element_value_pair" => false,
        "scoped_identifier"
        | "scoped_type_identifier"
        | "package_declaration"
        | "import_declaration"
        | "module_declaration" => false,
        "method_reference" => id.prev_sibling().is_none_or(|p| p.kind() != "::"),
        "explicit_constructor_invocation" => true,
        _ => true,
    }
}

/// A variable declared inside a Java method, with the byte range over which
/// the declaration is visible.
#[derive(Debug, Clone)]
pub(crate) struct JavaLocal<'t> {
    pub name: Node<'t>,
    pub scope: Range<usize>,
}

/// Parameters and locals declared in `func` (a method, constructor or
/// lambda), including those of nested blocks and lambdas.
pub(crate) fn java_locals<'t>(func: Node<'t>) -> Vec<JavaLocal<'t>> {
    let mut out = Vec::new();
    for n in func.descendants() {
        if n.ancestors()
            .take_while(|a| *a != func)
            .any(|a| a.kind() == "class_body")
        {
            continue;
        }
        match n.kind() {
            "formal_parameter" | "spread_parameter" => {
                let name = n.child_by_field("name").or_else(|| {
                    n.child_of_kind("variable_declarator")
                        .and_then(|d| d.child_by_field("name"))
                });
                let owner = n.parent().and_then(|p| p.parent());
                if let (Some(name), Some(owner)) = (name, owner) {
                    out.push(JavaLocal {
                        name,
                        scope: owner.span(),
                    });
                }
            }
            "inferred_parameters" => {
                if let Some(owner) = n.parent() {
                    for id in n.named_children() {
                        out.push(JavaLocal {
                            name: id,
                            scope: owner.span(),
                        });
                    }
                }
            }
            "lambda_expression" => {
                if let Some(p) = n
                    .child_by_field("parameters")
                    .filter(|p| p.kind() == "identifier")
                {
                    out.push(JavaLocal {
                        name: p,
                        scope: n.span(),
                    });
                }
            }
            "local_variable_declaration" => {
                let Some(parent) = n.parent() else { continue };
                // a declaration in a switch group stays visible in later groups
                let scope_end = match parent.kind() {
                    "switch_block_statement_group" => {
                        parent.parent().map_or(parent.end(), |b| b.end())
                    }
                    _ => parent.end(),
                };
                for d in n.children_by_field("declarator") {
                    if let Some(name) = d.child_by_field("name") {
                        // a for-init declaration is visible in the whole for statement
                        let start = if parent.kind() == "for_statement" {
                            parent.start()
                        } else {
                            name.start()
                        };
                        out.push(JavaLocal {
                            name,
                            scope: start..scope_end,
                        });
                    }
                }
            }
            "enhanced_for_statement" => {
                if let Some(name) = n.child_by_field("name") {
                    out.push(JavaLocal {
                        name,
                        scope: n.span(),
                    });
                }
            }
            "catch_formal_parameter" => {
                if let (Some(name), Some(clause)) = (n.child_by_field("name"), n.parent()) {
                    out.push(JavaLocal {
                        name,
                        scope: clause.span(),
                    });
                }
            }
            "resource" => {
                if let (Some(name), Some(stmt)) = (
                    n.child_by_field("name"),
                    n.ancestors()
                        .find(|a| a.kind() == "try_with_resources_statement"),
                ) {
                    out.push(JavaLocal {
                        name,
                        scope: stmt.span(),
                    });
                }
            }
            "instanceof_expression" => {
                if let Some(name) = n.child_by_field("name") {
                    // pattern variables: conservatively visible in the enclosing statement
                    if let Some(stmt) = n.ancestors().find(|a| JAVA_STATEMENTS.contains(&a.kind()))
                    {
                        out.push(JavaLocal {
                            name,
                            scope: stmt.span(),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

// -------------------------------------------------------------- Python ----

pub(crate) const PYTHON_BUILTINS: &[&str] = &[
    "abs",
    "all",
    "any",
    "ascii",
    "bin",
    "bool",
    "breakpoint",
    "bytearray",
    "bytes",
    "callable",
    "chr",
    "classmethod",
    "compile",
    "complex",
    "delattr",
    "dict",
    "dir",
    "divmod",
    "enumerate",
    "eval",
    "exec",
    "filter",
    "float",
    "format",
    "frozenset",
    "getattr",
    "globals",
    "hasattr",
    "hash",
    "help",
    "hex",
    "id",
    "input",
    "int",
    "isinstance",
    "issubclass",
    "iter",
    "len",
    "list",
    "locals",
    "map",
    "max",
    "memoryview",
    "min",
    "next",
    "object",
    "oct",
    "open",
    "ord",
    "pow",
    "print",
    "property",
    "range",
    "repr",
    "reversed",
    "round",
    "set",
    "setattr",
    "slice",
    "sorted",
    "staticmethod",
    "str",
    "sum",
    "super",
    "tuple",
    "type",
    "vars",
    "zip",
    "__import__",
    "self",
    "cls",
    "unicode",
    "long",
    "xrange",
    "basestring",
    "raw_input",
    "file",
    "reduce",
    "cmp",
    "unichr",
    "execfile",
    "reload",
    "NotImplemented",
    "Ellipsis",
    "__name__",
    "__file__",
    "__doc__",
    "__class__",
    "Exception",
    "BaseException",
    "ValueError",
    "TypeError",
    "KeyError",
    "IndexError",
    "AttributeError",
    "RuntimeError",
    "StopIteration",
    "OSError",
    "IOError",
    "NotImplementedError",
    "ImportError",
    "ZeroDivisionError",
    "AssertionError",
];

/// Names whose presence makes local renaming or removal unsafe.
pub(crate) const PYTHON_DYNAMIC_SCOPE: &[&str] =
    &["locals", "vars", "eval", "exec", "globals", "dir"];

pub(crate) fn python_is_literal(kind: &str) -> bool {
    matches!(
        kind,
        "integer" | "float" | "true" | "false" | "none" | "string" | "concatenated_string"
    )
}

/// Identifiers, literals and arithmetic/boolean operators over them.
/// Attribute access is allowed only when `allow_attribute` is set.
pub(crate) fn python_pure(node: Node<'_>, allow_attribute: bool) -> bool {
    match node.kind() {
        "identifier" => true,
        "string" => !node.descendants().any(|d| d.kind() == "interpolation"),
        k if python_is_literal(k) => true,
        "parenthesized_expression"
        | "binary_operator"
        | "unary_operator"
        | "boolean_operator"
        | "not_operator"
        | "comparison_operator"
        | "conditional_expression" => node
            .named_children()
            .filter(|c| !c.is_comment())
            .all(|c| python_pure(c, allow_attribute)),
        "attribute" => {
            allow_attribute
                && node
                    .child_by_field("object")
                    .is_some_and(|o| python_pure(o, allow_attribute))
        }
        _ => false,
    }
}

/// Whether an identifier node is a variable name (binding or use).
pub(crate) fn python_is_variable_position(id: Node<'_>) -> bool {
    if id.kind() != "identifier" {
        return false;
    }
    let Some(parent) = id.parent() else {
        return true;
    };
    let field = id.field_name();
    match parent.kind() {
        "attribute" => field != Some("attribute"),
        "keyword_argument" => field != Some("name"),
        "function_definition" | "class_definition" => field != Some("name"),
        "dotted_name"
        | "aliased_import"
        | "import_statement"
        | "import_from_statement"
        | "future_import_statement"
        | "global_statement"
        | "nonlocal_statement" => false,
        "decorator" => true,
        _ => true,
    }
}

/// Names bound by imports, `global` and `nonlocal` anywhere in `root`.
pub(crate) fn python_special_names(root: Node<'_>) -> HashSet<String> {
    let mut out = HashSet::new();
    for n in root.descendants() {
        match n.kind() {
            "import_statement" | "import_from_statement" | "future_import_statement" => {
                for d in n.descendants() {
                    if d.kind() == "identifier" {
                        out.insert(d.text().to_string());
                    }
                }
            }
            "global_statement" | "nonlocal_statement" => {
                for d in n.named_children() {
                    out.insert(d.text().to_string());
                }
            }
            _ => {}
        }
    }
    out
}

/// True when a function body calls something that inspects its locals.
pub(crate) fn python_uses_dynamic_scope(scope: Node<'_>) -> bool {
    scope.descendants().any(|n| {
        n.kind() == "call"
            && n.child_by_field("function").is_some_and(|f| {
                f.kind() == "identifier" && PYTHON_DYNAMIC_SCOPE.contains(&f.text())
            })
    })
}

/// True if a string literal under `node` spans several lines; re-indenting
/// code containing one would change its value.
pub(crate) fn multiline_strings(node: Node<'_>) -> bool {
    node.descendants().any(|d| {
        matches!(
            d.kind(),
            "string" | "concatenated_string" | "string_literal" | "text_block"
        ) && d.text().contains('\n')
    })
}

/// Whether a Python identifier is (re)bound at this occurrence.
pub(crate) fn python_is_binding(id: Node<'_>) -> bool {
    let mut child = id;
    for anc in id.ancestors() {
        match anc.kind() {
            "pattern_list"
            | "tuple_pattern"
            | "list_pattern"
            | "list_splat_pattern"
            | "dictionary_splat_pattern"
            | "parenthesized_expression"
            | "tuple"
            | "list" => {}
            "assignment" | "augmented_assignment" | "for_statement" | "for_in_clause" => {
                return child.field_name() == Some("left")
            }
            "named_expression" => return child.field_name() == Some("name"),
            "as_pattern_target"
            | "delete_statement"
            | "global_statement"
            | "nonlocal_statement"
            | "aliased_import"
            | "import_statement"
            | "import_from_statement"
            | "parameters"
            | "lambda_parameters" => return true,
            "default_parameter"
            | "typed_default_parameter"
            | "function_definition"
            | "class_definition" => return child.field_name() == Some("name"),
            "typed_parameter" => return child.field_name() != Some("type"),
            _ => return false,
        }
        child = anc;
    }
    false
}

/// Whether a Java statement can complete normally, judged conservatively:
/// `false` only when every path ends in a jump or a plainly infinite loop.
pub(crate) fn java_completes_normally(stmt: Node<'_>) -> bool {
    match stmt.kind() {
        "return_statement" | "throw_statement" | "break_statement" | "continue_statement"
        | "yield_statement" => false,
        "block" => match stmt.named_children().rfind(|c| !c.is_comment()) {
            Some(last) => java_completes_normally(last),
            None => true,
        },
        "while_statement" | "for_statement" | "do_statement" => {
            let infinite = match stmt.child_by_field("condition") {
                None => stmt.kind() == "for_statement",
                Some(c) => strip_parens(c).kind() == "true",
            };
            !infinite || has_own_break(stmt)
        }
        "if_statement" => match stmt.child_by_field("alternative") {
            None => true,
            Some(alt) => {
                java_completes_normally(alt)
                    || stmt
                        .child_by_field("consequence")
                        .is_none_or(java_completes_normally)
            }
        },
        "try_statement" => {
            if let Some(fin) = stmt
                .child_of_kind("finally_clause")
                .and_then(|f| f.child_of_kind("block"))
            {
                if !java_completes_normally(fin) {
                    return false;
                }
            }
            stmt.child_by_field("body")
                .is_none_or(java_completes_normally)
                || stmt
                    .children()
                    .filter(|c| c.kind() == "catch_clause")
                    .filter_map(|c| c.child_by_field("body"))
                    .any(java_completes_normally)
        }
        _ => true,
    }
}

/// True if `body` holds a `continue` that would resume the loop owning
/// `body` (unlabeled and not inside a nested loop, lambda or class).
pub(crate) fn has_own_continue(body: Node<'_>) -> bool {
    const BARRIERS: &[&str] = &[
        "for_statement",
        "enhanced_for_statement",
        "while_statement",
        "do_statement",
        "lambda_expression",
        "class_body",
        "function_definition",
        "lambda",
        "class_definition",
    ];
    let mut stack = vec![body];
    while let Some(n) = stack.pop() {
        if n.kind() == "continue_statement" {
            return true;
        }
        for c in n.children() {
            if !BARRIERS.contains(&c.kind()) {
                stack.push(c);
            }
        }
    }
    false
}

/// True if `lp` contains a `break` that leaves it: labeled anywhere, or
/// unlabeled outside nested loops and switches.
fn has_own_break(lp: Node<'_>) -> bool {
    const BARRIERS: &[&str] = &[
        "for_statement",
        "enhanced_for_statement",
        "while_statement",
        "do_statement",
        "switch_expression",
        "lambda_expression",
        "class_body",
    ];
    let mut stack: Vec<(Node<'_>, bool)> = lp.children().map(|c| (c, false)).collect();
    while let Some((n, nested)) = stack.pop() {
        if n.kind() == "break_statement" {
            let labeled = n.named_children().any(|c| c.kind() == "identifier");
            if labeled || !nested {
                return true;
            }
        }
        if matches!(n.kind(), "lambda_expression" | "class_body") {
            continue;
        }
        let inner = nested || BARRIERS.contains(&n.kind());
        for c in n.children() {
            stack.push((c, inner));
        }
    }
    false
}
