//! Before/after pairs for the strategies that come with a worked example.
#![allow(dead_code)]

use codemorph::syntax::{Language, SourceSnippet};
use codemorph::transform::{apply, strategy, TransformConfig};

pub struct Golden {
    pub strategy: &'static str,
    pub language: Language,
    pub before: &'static str,
    pub after: &'static str,
}

const fn java(strategy: &'static str, before: &'static str, after: &'static str) -> Golden {
    Golden {
        strategy,
        language: Language::Java,
        before,
        after,
    }
}

const fn python(strategy: &'static str, before: &'static str, after: &'static str) -> Golden {
    Golden {
        strategy,
        language: Language::Python,
        before,
        after,
    }
}

pub const GOLDENS: &[Golden] = &[
    java(
        "B-3",
        "void f(int x) { if(x==1){ }else{if(x==2){ } } }",
        "void f(int x) { if (x==1){ }else if (x==2){ } }",
    ),
    python(
        "B-3",
        "if x == 1:\n    pass\nelse:\n    if x == 2:\n        pass\n",
        "if x == 1:\n    pass\nelif x == 2:\n    pass\n",
    ),
    java(
        "B-4",
        "void f(int x) { if(x==1){ }else if (x==2) { } }",
        "void f(int x) { if (x==1) { } else { if(x==2){ } } }",
    ),
    python(
        "B-4",
        "if x == 1:\n    pass\nelif x == 2:\n    pass\n",
        "if x == 1:\n    pass\nelse:\n    if x == 2:\n        pass\n",
    ),
    java(
        "B-5",
        "void f(int x) { if(x==0){ block1(); }else{ block2(); } }",
        "void f(int x) { if(!(x==0)){ block2(); }else{ block1(); } }",
    ),
    python(
        "B-5",
        "if x == 0:\n    block1()\nelse:\n    block2()\n",
        "if not (x == 0):\n    block2()\nelse:\n    block1()\n",
    ),
    java(
        "B-6",
        "void f(int x) { if (x > 0 && x < 9) go(); }",
        "void f(int x) { if (x > 0) { if (x < 9) go(); } }",
    ),
    python(
        "B-6",
        "if x > 0 and x < 9:\n    go()\n",
        "if x > 0:\n    if x < 9:\n        go()\n",
    ),
    python(
        "B-7",
        "z = x+y\n",
        "def func(x, y):\n    return x+y\nz = func(x, y)\n",
    ),
    java(
        "GS-2",
        "void f() { int i; for(i=0;i<10;i++) s(); }",
        "void f() { for(int i=0;i<10;i++) s(); }",
    ),
    java(
        "GS-4",
        "void f() { int i=0; s(i); }",
        "void f() { int i; i=0; s(i); }",
    ),
    java(
        "GS-5",
        "boolean f(int x, int y) { return x<y; }",
        "boolean f(int x, int y) { return !(x >= y); }",
    ),
    python("GS-5", "r = x < y\n", "r = not (x >= y)\n"),
    java(
        "GS-6",
        "boolean f(int x, int y) { return x<y; }",
        "boolean f(int x, int y) { return y>x; }",
    ),
    python("GS-6", "r = x < y\n", "r = y > x\n"),
    java(
        "GS-7",
        "void f(int x) { x+=1; s(x); }",
        "void f(int x) { x = x + 1; s(x); }",
    ),
    python("GS-7", "x = 0\nx += 1\n", "x = 0\nx = x + 1\n"),
    java(
        "GS-8",
        "void f(int x) { x++; s(x); }",
        "void f(int x) { x = x + 1; s(x); }",
    ),
    python("GT-1", "flag = True\n", "flag = 1\n"),
    python("ID-6", "def f(x):\n    print(x)\n", "def f(x):\n    pass\n"),
    java(
        "ID-6",
        "void f(int x) { System.out.println(x); }",
        "void f(int x) { ; }",
    ),
];

/// Drops all whitespace, so layout differences do not matter.
pub fn squash(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Runs one golden and returns the produced text, or a description of what
/// went wrong.
pub fn run(g: &Golden) -> Result<String, String> {
    let s = strategy(g.strategy).map_err(|e| e.to_string())?;
    let snippet = SourceSnippet::new("golden", g.language, g.before);
    let out = apply(s, &snippet, &TransformConfig::default()).map_err(|e| e.to_string())?;
    let text = out
        .new_text
        .ok_or_else(|| format!("not applied: {}", out.reason.unwrap_or_default()))?;
    if squash(&text) == squash(g.after) {
        Ok(text)
    } else {
        Err(format!("got:\n{text}\nexpected:\n{}", g.after))
    }
}
