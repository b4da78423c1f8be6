//! Runs executable fixtures before and after every strategy and compares
//! their output. Java variants are compiled in one `javac` call, each in its
//! own package, since compiler start-up dominates the cost.
#![allow(dead_code)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use codemorph::syntax::{Language, SourceSnippet};
use codemorph::transform::{apply, list_strategies, TransformConfig};

/// Comment-only strategies and print removal change output by design.
pub const EXCLUDED: &[&str] = &["ID-1", "ID-5", "ID-6"];

pub const STDIN: &str = "alpha beta\ngamma\n";

pub fn fixture_dir(language: Language) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/exec")
        .join(language.as_str())
}

pub struct Variant {
    pub fixture: String,
    pub strategy: Option<&'static str>,
    pub text: String,
}

#[derive(Debug, Default)]
pub struct ExecSummary {
    pub fixtures: usize,
    pub compared: usize,
    pub mismatches: Vec<String>,
    /// Strategies that applied to at least one fixture.
    pub exercised: Vec<&'static str>,
}

fn fixtures(language: Language) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(fixture_dir(language))
        .expect("fixture dir")
        .map(|e| e.unwrap().path())
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

pub fn variants(language: Language) -> Vec<Vec<Variant>> {
    let config = TransformConfig::default();
    fixtures(language)
        .into_iter()
        .map(|(name, text)| {
            let snippet = SourceSnippet::new(name.clone(), language, text.clone());
            let mut vs = vec![Variant {
                fixture: name.clone(),
                strategy: None,
                text,
            }];
            for s in list_strategies(Some(language)) {
                if EXCLUDED.contains(&s.id) {
                    continue;
                }
                match apply(s, &snippet, &config) {
                    Ok(o) => {
                        if let Some(text) = o.new_text {
                            vs.push(Variant {
                                fixture: name.clone(),
                                strategy: Some(s.id),
                                text,
                            });
                        }
                    }
                    Err(e) => vs.push(Variant {
                        fixture: name.clone(),
                        strategy: Some(s.id),
                        text: format!("<<transform error: {e}>>"),
                    }),
                }
            }
            vs
        })
        .collect()
}

fn run(cmd: &mut Command) -> String {
    let mut child = match cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return format!("<<spawn failed: {e}>>"),
    };
    child
        .stdin
        .take()
        .unwrap()
        .write_all(STDIN.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    format!(
        "{}\n<<exit {:?}>>",
        String::from_utf8_lossy(&out.stdout),
        out.status.code()
    )
}

fn tool_available(tool: &str) -> bool {
    Command::new(tool)
        .arg("-version")
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .is_ok()
}

fn compile_java(files: &[PathBuf], out: &Path) -> Result<(), String> {
    let res = Command::new("javac")
        .arg("-d")
        .arg(out)
        .args(files)
        .output()
        .map_err(|e| e.to_string())?;
    if res.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&res.stderr).into_owned())
    }
}

fn outputs_java(groups: &[Vec<Variant>]) -> Result<Vec<Vec<String>>, String> {
    if !tool_available("java") || !tool_available("javac") {
        return Err("javac/java not found on PATH".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let classes = dir.path().join("classes");
    fs::create_dir_all(&classes).unwrap();
    let mut files = Vec::new();
    for (g, vs) in groups.iter().enumerate() {
        for (v, var) in vs.iter().enumerate() {
            let pkg = format!("f{g}v{v}");
            let path = dir.path().join(&pkg).join("Main.java");
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(&path, format!("package {pkg};\n{}", var.text)).unwrap();
            files.push(path);
        }
    }
    let failed_compile: Vec<usize> = if compile_java(&files, &classes).is_ok() {
        Vec::new()
    } else {
        (0..files.len())
            .filter(|&i| compile_java(&files[i..=i], &classes).is_err())
            .collect()
    };
    let mut i = 0;
    let mut out = Vec::new();
    for (g, vs) in groups.iter().enumerate() {
        let mut row = Vec::new();
        for v in 0..vs.len() {
            row.push(if failed_compile.contains(&i) {
                format!(
                    "<<compile error: {}>>",
                    compile_java(&files[i..=i], &classes).unwrap_err()
                )
            } else {
                run(Command::new("java")
                    .arg("-cp")
                    .arg(&classes)
                    .arg(format!("f{g}v{v}.Main")))
            });
            i += 1;
        }
        out.push(row);
    }
    Ok(out)
}

fn outputs_python(groups: &[Vec<Variant>]) -> Result<Vec<Vec<String>>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (g, vs) in groups.iter().enumerate() {
        let mut row = Vec::new();
        for (v, var) in vs.iter().enumerate() {
            let path = dir.path().join(format!("f{g}v{v}.py"));
            fs::write(&path, &var.text).unwrap();
            row.push(run(Command::new("python3").arg(&path)));
        }
        out.push(row);
    }
    Ok(out)
}

/// Compares every applicable strategy's output with the original on all
/// fixtures of `language`.
pub fn check(language: Language) -> Result<ExecSummary, String> {
    let groups = variants(language);
    let outputs = match language {
        Language::Java => outputs_java(&groups)?,
        Language::Python => outputs_python(&groups)?,
    };
    let mut summary = ExecSummary {
        fixtures: groups.len(),
        ..ExecSummary::default()
    };
    for (vs, outs) in groups.iter().zip(&outputs) {
        let expected = &outs[0];
        if expected.contains("<<compile error") || !expected.ends_with("<<exit Some(0)>>") {
            summary.mismatches.push(format!(
                "{}: original does not run: {expected}",
                vs[0].fixture
            ));
            continue;
        }
        for (var, got) in vs.iter().zip(outs).skip(1) {
            let id = var.strategy.unwrap();
            summary.compared += 1;
            if !summary.exercised.contains(&id) {
                summary.exercised.push(id);
            }
            if got != expected {
                summary.mismatches.push(format!(
                    "{} {id}: output differs\n--- transformed\n{}\n--- got\n{got}\n--- expected\n{expected}",
                    var.fixture, var.text
                ));
            }
        }
    }
    summary.exercised.sort();
    Ok(summary)
}
