//! Fixtures for strategy pairs that undo each other: applying the first
//! then the second must give back the original token sequence.
#![allow(dead_code)]

use codemorph::syntax::{parse, tokens_dfs, Language, SourceSnippet};
use codemorph::transform::{apply, strategy, TransformConfig};

pub struct Pair {
    pub forward: &'static str,
    pub backward: &'static str,
    pub language: Language,
    pub fixtures: &'static [&'static str],
}

pub const PAIRS: &[Pair] = &[
    Pair {
        forward: "B-3",
        backward: "B-4",
        language: Language::Java,
        fixtures: &[
            "void f(int x) { if(x==1){ }else{if(x==2){ } } }",
            "void f(int x) { if (x == 1) { a(); } else { if (x == 2) { b(); } else { c(); } } }",
            "int g(int n) {\n    if (n < 0) {\n        return -1;\n    } else {\n        if (n == 0) {\n            return 0;\n        }\n    }\n    return 1;\n}",
            "void f(String s) { if (s == null) { return; } else { if (s.isEmpty()) { log(s); } } }",
            "void f(int a, int b) { if (a > b) { swap(); } else { if (a == b) { same(); } } }",
            "void f(boolean p, boolean q) { if (p) { x(); } else { if (q) y(); } }",
            "void f(int[] xs) { for (int x : xs) { if (x % 2 == 0) { even(x); } else { if (x % 3 == 0) { three(x); } } } }",
            "void f(int k) { while (k > 0) { if (k > 10) { k -= 10; } else { if (k > 5) { k -= 5; } else { k--; } } } }",
            "char grade(int s) { if (s >= 90) { return 'A'; } else { if (s >= 80) { return 'B'; } else { return 'C'; } } }",
            "void f(Object o) { if (o instanceof String) { str(o); } else { if (o instanceof Integer) { num(o); } } }",
            "void f(int a) { if (a == 1) { one(); } else { if (a == 2) { two(); } else { if (a == 3) { three(); } } } }",
        ],
    },
    Pair {
        forward: "B-3",
        backward: "B-4",
        language: Language::Python,
        fixtures: &[
            "if x == 1:\n    pass\nelse:\n    if x == 2:\n        pass\n",
            "def f(x):\n    if x < 0:\n        return -1\n    else:\n        if x == 0:\n            return 0\n    return 1\n",
            "def f(s):\n    if s is None:\n        return\n    else:\n        if not s:\n            log(s)\n",
            "def f(a, b):\n    if a > b:\n        swap()\n    else:\n        if a == b:\n            same()\n        else:\n            other()\n",
            "for x in xs:\n    if x % 2 == 0:\n        even(x)\n    else:\n        if x % 3 == 0:\n            three(x)\n",
            "while k > 0:\n    if k > 10:\n        k -= 10\n    else:\n        if k > 5:\n            k -= 5\n        else:\n            k -= 1\n",
            "def grade(s):\n    if s >= 90:\n        return 'A'\n    else:\n        if s >= 80:\n            return 'B'\n        else:\n            return 'C'\n",
            "def f(o):\n    if isinstance(o, str):\n        text(o)\n    else:\n        if isinstance(o, int):\n            num(o)\n",
            "class C:\n    def m(self, v):\n        if v:\n            self.a = v\n        else:\n            if v is None:\n                self.a = 0\n",
            "if ready:\n    go()\nelse:\n    if retry:\n        wait()\n        go()\n",
            "def f(a):\n    if a == 1:\n        one()\n    else:\n        if a == 2:\n            two()\n        else:\n            if a == 3:\n                three()\n",
        ],
    },
    Pair {
        forward: "GT-1",
        backward: "GT-2",
        language: Language::Python,
        fixtures: &[
            "while True:\n    step()\n",
            "if True:\n    go()\n",
            "def f():\n    while True:\n        if done():\n            break\n",
            "assert True\n",
            "x = a if True else b\n",
            "if not False:\n    go()\n",
            "def f(a):\n    if a and True:\n        return a\n",
            "while (True):\n    tick()\n",
            "if False or ready:\n    go()\n",
            "def loop():\n    while True:\n        item = next_item()\n        if item is None:\n            return\n        handle(item)\n",
            "class C:\n    def run(self):\n        while True:\n            self.tick()\n",
        ],
    },
    Pair {
        forward: "GS-9",
        backward: "GS-10",
        language: Language::Java,
        fixtures: &[
            "void f(int x) { if (x > 0) go(); }",
            "void f(int x) { if (x > 0) a(); else b(); }",
            "void f(int n) { for (int i = 0; i < n; i++) s(i); }",
            "void f(int n) { while (n > 0) n--; }",
            "void f(int[] xs) { for (int x : xs) use(x); }",
            "void f(int n) { do n--; while (n > 0); }",
            "int f(int x) {\n    if (x < 0)\n        return -x;\n    return x;\n}",
            "void f(int n) { for (int i = 0; i < n; i++) for (int j = 0; j < i; j++) s(i, j); }",
            "void f(boolean p) { if (p) System.out.println(1); else if (!p) System.out.println(2); }",
            "void f(int a) { while (a > 10) if (a % 2 == 0) a /= 2; else a -= 1; }",
            "void f(java.util.List<String> xs) { for (String s : xs) if (!s.isEmpty()) print(s); }",
        ],
    },
];

fn dfs(language: Language, text: &str) -> Result<Vec<String>, String> {
    let tree = parse(&SourceSnippet::new("inverse", language, text)).map_err(|e| e.to_string())?;
    Ok(tokens_dfs(&tree).into_texts())
}

fn step(id: &str, language: Language, text: &str) -> Result<String, String> {
    let s = strategy(id).map_err(|e| e.to_string())?;
    let out = apply(
        s,
        &SourceSnippet::new("inverse", language, text),
        &TransformConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    out.new_text
        .ok_or_else(|| format!("{id} not applied: {}", out.reason.unwrap_or_default()))
}

/// Applies the pair to one fixture and checks the round trip.
pub fn round_trip(pair: &Pair, fixture: &str) -> Result<(), String> {
    let mid = step(pair.forward, pair.language, fixture)?;
    let back = step(pair.backward, pair.language, &mid)?;
    if dfs(pair.language, fixture)? == dfs(pair.language, &back)? {
        Ok(())
    } else {
        Err(format!(
            "round trip changed tokens:\n{fixture}\n->\n{mid}\n->\n{back}"
        ))
    }
}
