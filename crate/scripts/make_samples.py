#!/usr/bin/env python3
"""Regenerate the sample corpora under data/.

python_sample.jsonl: functions and methods taken from the CPython standard
library (dedented, with their docstring as the summary).
java_sample.jsonl: methods produced by a seeded template generator.

Usage: scripts/make_samples.py [--count N] [--seed S]
"""
import argparse
import ast
import json
import random
import sys
import sysconfig
import textwrap
from pathlib import Path

MODULES = [
    "textwrap", "shlex", "fnmatch", "glob", "bisect", "heapq", "colorsys",
    "calendar", "difflib", "statistics", "fractions", "string", "copy",
    "csv", "json/encoder", "json/decoder", "posixpath", "genericpath",
    "ntpath", "base64", "quopri", "uu", "smtplib", "ftplib", "gettext",
    "locale", "tokenize", "tabnanny", "pprint", "reprlib", "operator",
    "random", "datetime", "ipaddress", "urllib/parse", "email/utils",
    "email/quoprimime", "email/_parseaddr", "html/__init__", "http/cookies",
    "configparser", "argparse", "optparse", "getopt", "zipfile", "tarfile",
    "shutil", "filecmp", "netrc", "mimetypes", "plistlib", "sched", "queue",
    "imghdr", "sndhdr", "wave", "chunk", "cmd", "code", "codeop", "dis",
    "inspect", "pydoc", "ast", "keyword", "linecache", "traceback",
    "warnings", "weakref", "functools", "collections/__init__", "enum",
    "numbers", "decimal", "_pydecimal", "_strptime", "selectors", "socket",
    "ssl", "subprocess", "threading", "tempfile", "uuid", "hashlib", "hmac",
    "secrets", "platform", "sysconfig", "site", "trace", "timeit", "cProfile",
    "pstats", "bdb", "pdb", "doctest", "unittest/case", "unittest/util",
    "logging/__init__", "logging/handlers", "xml/dom/minidom",
    "xml/etree/ElementPath", "wsgiref/headers", "wsgiref/util", "nntplib",
    "poplib", "imaplib", "mailbox", "mailcap", "netrc", "opcode", "pickletools",
    "sre_parse", "sre_compile", "stringprep", "symtable", "textwrap", "this",
]


def python_records(count):
    root = Path(sysconfig.get_paths()["stdlib"])
    records, seen = [], set()
    for mod in dict.fromkeys(MODULES):
        path = root / (mod + ".py")
        if not path.exists():
            continue
        src = path.read_text(encoding="utf-8")
        try:
            tree = ast.parse(src)
        except SyntaxError:
            continue
        for node in ast.walk(tree):
            if not isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                continue
            seg = ast.get_source_segment(src, node)
            if seg is None:
                continue
            first = src.splitlines()[node.lineno - 1]
            indent = first[: len(first) - len(first.lstrip())]
            code = textwrap.dedent(indent + seg)
            lines = code.count("\n") + 1
            if lines < 4 or lines > 40 or not code.isascii():
                continue
            if node.decorator_list:
                continue
            key = f"{mod}.{node.name}"
            if key in seen:
                continue
            seen.add(key)
            try:
                ast.parse(code)
            except SyntaxError:
                continue
            records.append({
                "id": f"py/{key}",
                "language": "python",
                "code": code + "\n",
                "docstring": ast.get_docstring(node),
                "path": f"Lib/{mod}.py",
            })
            if len(records) >= count:
                return records
    return records


JAVA_TYPES = ["int", "long", "double", "float", "boolean", "String", "char"]
NAMES = ["count", "total", "index", "value", "size", "limit", "result",
         "sum", "offset", "width", "height", "score", "step", "left", "right"]
VERBS = ["compute", "find", "count", "sum", "check", "build", "merge",
         "scan", "update", "collect", "reduce", "parse", "render", "apply"]
NOUNS = ["Items", "Values", "Range", "Total", "Index", "Matches", "Scores",
         "Buffer", "Limits", "Words", "Pairs", "Nodes", "Rows", "Tokens"]


class JavaGen:
    def __init__(self, rng):
        self.rng = rng

    def name(self, used):
        while True:
            n = self.rng.choice(NAMES)
            if n not in used:
                used.add(n)
                return n
            if len(used) >= len(NAMES):
                n = n + str(len(used))
                used.add(n)
                return n

    def cond(self, a, b):
        op = self.rng.choice(["<", "<=", ">", ">=", "==", "!="])
        return f"{a} {op} {b}"

    def stmt(self, vars_, depth, ind):
        r = self.rng
        pad = "    " * ind
        a, b = r.choice(vars_), r.choice(vars_)
        kind = r.choice(["assign", "compound", "incr", "if", "ifelse", "elseif",
                         "for", "while", "print", "and", "call", "decl"]
                        if depth < 2 else ["assign", "compound", "incr", "print", "call"])
        if kind == "assign":
            return [f"{pad}{a} = {b} {r.choice(['+', '-', '*'])} {r.randint(1, 9)};"]
        if kind == "compound":
            return [f"{pad}{a} {r.choice(['+=', '-=', '*='])} {r.randint(1, 5)};"]
        if kind == "incr":
            return [f"{pad}{a}{r.choice(['++', '--'])};"]
        if kind == "print":
            return [f"{pad}System.out.println({a} + {b});"]
        if kind == "call":
            return [f"{pad}log({a});"]
        if kind == "decl":
            n = f"tmp{r.randint(0, 99)}"
            if n in vars_:
                return [f"{pad}{a} = {b};"]
            vars_.append(n)
            return [f"{pad}int {n} = {a} + {r.randint(0, 9)};"]
        if kind == "and":
            body = self.block(vars_, depth + 1, ind + 1, 1)
            return [f"{pad}if ({self.cond(a, r.randint(0, 9))} && {self.cond(b, a)}) {{", *body, f"{pad}}}"]
        if kind == "if":
            body = self.block(vars_, depth + 1, ind + 1, r.randint(1, 2))
            if len(body) == 1 and r.random() < 0.5:
                return [f"{pad}if ({self.cond(a, b)})", *body]
            return [f"{pad}if ({self.cond(a, b)}) {{", *body, f"{pad}}}"]
        if kind == "ifelse":
            t = self.block(vars_, depth + 1, ind + 1, 1)
            e = self.block(vars_, depth + 1, ind + 1, 1)
            return [f"{pad}if ({self.cond(a, b)}) {{", *t, f"{pad}}} else {{", *e, f"{pad}}}"]
        if kind == "elseif":
            t = self.block(vars_, depth + 1, ind + 1, 1)
            e = self.block(vars_, depth + 1, ind + 1, 1)
            if r.random() < 0.5:
                return [f"{pad}if ({self.cond(a, 0)}) {{", *t,
                        f"{pad}}} else if ({self.cond(b, 1)}) {{", *e, f"{pad}}}"]
            inner = [("    " + l) for l in e]
            return [f"{pad}if ({self.cond(a, 0)}) {{", *t, f"{pad}}} else {{",
                    f"{pad}    if ({self.cond(b, 1)}) {{", *inner, f"{pad}    }}", f"{pad}}}"]
        if kind == "for":
            i = r.choice(["i", "j", "k"])
            if i in vars_:
                return [f"{pad}{a} += {b};"]
            inner_vars = vars_ + [i]
            body = self.block(inner_vars, depth + 1, ind + 1, r.randint(1, 2))
            if r.random() < 0.3:
                vars_.append(i)
                return [f"{pad}int {i};", f"{pad}for ({i} = 0; {i} < {a}; {i}++) {{", *body, f"{pad}}}"]
            return [f"{pad}for (int {i} = 0; {i} < {a}; {i}++) {{", *body, f"{pad}}}"]
        if kind == "while":
            body = self.block(vars_, depth + 1, ind + 1, 1)
            return [f"{pad}while ({a} > {r.randint(0, 5)}) {{", *body, f"{pad}{a}--;", f"{pad}}}"]
        raise AssertionError(kind)

    def block(self, vars_, depth, ind, n):
        out = []
        for _ in range(n):
            out.extend(self.stmt(vars_, depth, ind))
        return out

    def method(self, k):
        r = self.rng
        used = set()
        params = [self.name(used) for _ in range(r.randint(1, 3))]
        locals_ = [self.name(used) for _ in range(r.randint(1, 3))]
        ret = r.choice(["int", "void", "boolean", "long"])
        name = r.choice(VERBS) + r.choice(NOUNS)
        lines = []
        if r.random() < 0.3:
            lines.append("    // " + r.choice(["fast path", "see caller", "keep in sync", "bounds checked above"]))
        if r.random() < 0.3 and len(locals_) >= 2:
            lines.append(f"    int {locals_[0]} = {r.randint(0, 9)}, {locals_[1]} = {r.randint(0, 9)};")
            rest = locals_[2:]
        else:
            rest = locals_
        for v in rest:
            lines.append(f"    int {v} = {r.randint(0, 9)};")
        if r.random() < 0.2:
            lines.append(f"    int unused{k % 7} = {r.randint(0, 9)};")
        vars_ = params + locals_
        lines.extend(self.block(vars_, 0, 1, r.randint(2, 5)))
        if ret == "int":
            lines.append(f"    return {r.choice([locals_[0], str(r.randint(0, 3))])};")
        elif ret == "long":
            lines.append(f"    return {locals_[0]};")
        elif ret == "boolean":
            lines.append(f"    return {self.cond(locals_[0], params[0])};")
        sig = ", ".join(f"int {p}" for p in params)
        mods = r.choice(["", "public ", "private ", "static ", "public static "])
        code = f"{mods}{ret} {name}({sig}) {{\n" + "\n".join(lines) + "\n}\n"
        return {"id": f"java/gen{k:04d}", "language": "java", "code": code,
                "docstring": f"{name} over {', '.join(params)}"}


def java_records(count, seed):
    gen = JavaGen(random.Random(seed))
    return [gen.method(k) for k in range(count)]


def write(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            if r.get("docstring") is None:
                r.pop("docstring", None)
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=520)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()
    py = python_records(args.count)
    if len(py) < args.count:
        sys.exit(f"only {len(py)} python functions found")
    write(args.out / "python_sample.jsonl", py)
    write(args.out / "java_sample.jsonl", java_records(args.count, args.seed))
    print(f"wrote {len(py)} python and {args.count} java records to {args.out}")


if __name__ == "__main__":
    main()
