use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use log::{debug, warn};

use super::Language;
use crate::error::{Error, Result};

/// Directory searched for externally built grammar libraries.
pub const GRAMMAR_DIR_ENV: &str = "CODEMORPH_GRAMMAR_DIR";

static JAVA: OnceLock<std::result::Result<tree_sitter::Language, String>> = OnceLock::new();
static PYTHON: OnceLock<std::result::Result<tree_sitter::Language, String>> = OnceLock::new();

/// Returns the tree-sitter grammar for `language`.
///
/// If `CODEMORPH_GRAMMAR_DIR` names a directory containing a shared library for
/// the language (`libtree-sitter-<lang>.so`, `tree-sitter-<lang>.so` or
/// `<lang>.so`), that library is loaded; otherwise the grammar compiled into
/// this crate is used. The result is cached for the life of the process.
pub fn grammar(language: Language) -> Result<tree_sitter::Language> {
    let cell = match language {
        Language::Java => &JAVA,
        Language::Python => &PYTHON,
    };
    cell.get_or_init(|| load(language))
        .clone()
        .map_err(|detail| Error::GrammarUnavailable { language, detail })
}

fn load(language: Language) -> std::result::Result<tree_sitter::Language, String> {
    if let Some(dir) = std::env::var_os(GRAMMAR_DIR_ENV) {
        let dir = PathBuf::from(dir);
        match find_library(&dir, language) {
            Some(path) => return load_dynamic(&path, language),
            None => warn!(
                "{GRAMMAR_DIR_ENV}={} has no {} grammar; using the bundled one",
                dir.display(),
                language.as_str()
            ),
        }
    }
    let bundled: tree_sitter::Language = match language {
        Language::Java => tree_sitter_java::LANGUAGE.into(),
        Language::Python => tree_sitter_python::LANGUAGE.into(),
    };
    check_abi(&bundled)?;
    Ok(bundled)
}

fn find_library(dir: &Path, language: Language) -> Option<PathBuf> {
    let name = language.as_str();
    [
        format!("libtree-sitter-{name}.so"),
        format!("tree-sitter-{name}.so"),
        format!("{name}.so"),
    ]
    .into_iter()
    .map(|file| dir.join(file))
    .find(|p| p.is_file())
}

fn load_dynamic(
    path: &Path,
    language: Language,
) -> std::result::Result<tree_sitter::Language, String> {
    debug!(
        "loading {} grammar from {}",
        language.as_str(),
        path.display()
    );
    let symbol = format!("tree_sitter_{}", language.as_str());
    // SAFETY: the library is expected to be a tree-sitter grammar exporting
    // `tree_sitter_<lang>` with the standard C ABI. It is leaked so the
    // returned language stays valid for the life of the process.
    unsafe {
        let lib = libloading::Library::new(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let func: libloading::Symbol<unsafe extern "C" fn() -> *const ()> = lib
            .get(symbol.as_bytes())
            .map_err(|e| format!("{}: missing symbol {symbol}: {e}", path.display()))?;
        let raw = *func;
        std::mem::forget(lib);
        let lang_fn = tree_sitter_language::LanguageFn::from_raw(raw);
        let lang = tree_sitter::Language::new(lang_fn);
        check_abi(&lang)?;
        Ok(lang)
    }
}

fn check_abi(lang: &tree_sitter::Language) -> std::result::Result<(), String> {
    let mut parser = tree_sitter::Parser::new();
    parser.set_language(lang).map_err(|e| e.to_string())
}
