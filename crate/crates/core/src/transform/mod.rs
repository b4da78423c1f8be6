//! The semantic-preserving transformation strategies and their driver.
//!
//! Every strategy inspects the concrete syntax tree of the original snippet
//! and proposes candidate sites, each carrying the byte edits that rewrite
//! it. The driver picks sites according to the [`SitePolicy`], applies the
//! edits to the original text and re-parses the result.

mod analysis;
mod catalog;
mod ctx;
mod strategies;
mod verify;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{apply_edits, has_errors, parse, parse_text, EditSet, Language, SourceSnippet};

use ctx::{Candidates, Ctx};

pub use verify::{
    token_delta, verify_preservation, verify_preservation_with, TokenDelta, VerificationReport,
    VerifyOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "T_B")]
    Block,
    #[serde(rename = "T_ID")]
    InsertDelete,
    #[serde(rename = "T_GS")]
    GrammaticalStatement,
    #[serde(rename = "T_GT")]
    GrammaticalToken,
    #[serde(rename = "T_I")]
    Identifier,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Block,
        Category::InsertDelete,
        Category::GrammaticalStatement,
        Category::GrammaticalToken,
        Category::Identifier,
    ];

    /// Short code used in the result tables, e.g. `T_GS`.
    pub fn code(self) -> &'static str {
        match self {
            Category::Block => "T_B",
            Category::InsertDelete => "T_ID",
            Category::GrammaticalStatement => "T_GS",
            Category::GrammaticalToken => "T_GT",
            Category::Identifier => "T_I",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Category::Block => "Block transformation",
            Category::InsertDelete => "Insertion / deletion transformation",
            Category::GrammaticalStatement => "Grammatical statement transformation",
            Category::GrammaticalToken => "Grammatical token transformation",
            Category::Identifier => "Identifier transformation",
        }
    }

    pub fn strategies(self) -> impl Iterator<Item = &'static Strategy> {
        catalog::STRATEGIES
            .iter()
            .filter(move |s| s.category == self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        let key = key.strip_prefix("T_").unwrap_or(&key);
        match key {
            "B" | "BLOCK" => Ok(Category::Block),
            "ID" | "INSERT-DELETE" | "INSERTDELETE" => Ok(Category::InsertDelete),
            "GS" | "GRAMMATICAL-STATEMENT" => Ok(Category::GrammaticalStatement),
            "GT" | "GRAMMATICAL-TOKEN" => Ok(Category::GrammaticalToken),
            "I" | "IDENTIFIER" => Ok(Category::Identifier),
            _ => Err(Error::UnknownCategory(s.to_string())),
        }
    }
}

/// One row of the strategy catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub id: &'static str,
    pub category: Category,
    pub languages: &'static [Language],
    pub name: &'static str,
    pub description: &'static str,
}

impl Strategy {
    pub fn supports(&self, language: Language) -> bool {
        self.languages.contains(&language)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id)
    }
}

/// The catalog, optionally restricted to strategies defined for `language`.
pub fn list_strategies(language: Option<Language>) -> Vec<&'static Strategy> {
    catalog::STRATEGIES
        .iter()
        .filter(|s| language.is_none_or(|l| s.supports(l)))
        .collect()
}

/// Looks a strategy up by id, case-insensitively.
pub fn strategy(id: &str) -> Result<&'static Strategy> {
    catalog::STRATEGIES
        .iter()
        .find(|s| s.id.eq_ignore_ascii_case(id.trim()))
        .ok_or_else(|| Error::UnknownStrategy(id.to_string()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SitePolicy {
    /// Every non-overlapping site, in document order.
    #[default]
    All,
    First,
    /// One site chosen by the seeded generator.
    RandomOne,
}

impl FromStr for SitePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "all" => Ok(SitePolicy::All),
            "first" => Ok(SitePolicy::First),
            "random-one" | "randomone" | "random" => Ok(SitePolicy::RandomOne),
            _ => Err(Error::InvalidParams(format!("unknown site policy `{s}`"))),
        }
    }
}

/// Where ID-1 and ID-2 place their insertion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InsertLocation {
    Front,
    #[default]
    Middle,
    End,
}

impl FromStr for InsertLocation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "front" => Ok(InsertLocation::Front),
            "middle" => Ok(InsertLocation::Middle),
            "end" => Ok(InsertLocation::End),
            _ => Err(Error::InvalidParams(format!(
                "unknown insert location `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub seed: u64,
    #[serde(default)]
    pub site_policy: SitePolicy,
    #[serde(default)]
    pub insert_location: InsertLocation,
    #[serde(default)]
    pub junk_template_index: Option<usize>,
    /// Command run by [`verify_preservation`] on the transformed text; `{}`
    /// is replaced by a temporary file path (appended when absent).
    #[serde(default)]
    pub verify_cmd: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Applied,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformOutcome {
    pub strategy: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_text: Option<String>,
    pub edits: EditSet,
    /// Byte ranges of the original text that were rewritten.
    pub sites: Vec<Range<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl TransformOutcome {
    pub fn is_applied(&self) -> bool {
        self.status == Status::Applied
    }

    fn not_applicable(strategy: &'static str, reason: String) -> Self {
        TransformOutcome {
            strategy: strategy.to_string(),
            status: Status::NotApplicable,
            new_text: None,
            edits: EditSet::new(),
            sites: Vec::new(),
            reason: Some(reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub applicable: bool,
    /// Spans of the candidate anchor nodes.
    pub sites: Vec<Range<usize>>,
    pub reason: Option<String>,
}

fn check_inputs(
    strategy: &'static Strategy,
    snippet: &SourceSnippet,
) -> Result<crate::syntax::SyntaxTree> {
    if !strategy.supports(snippet.language) {
        return Err(Error::LanguageMismatch {
            strategy: strategy.id,
            language: snippet.language,
        });
    }
    let tree = parse(snippet)?;
    if has_errors(&tree) {
        return Err(Error::ParseErrors {
            id: snippet.id.clone(),
        });
    }
    Ok(tree)
}

fn candidates(
    strategy: &'static Strategy,
    snippet: &SourceSnippet,
    config: &TransformConfig,
) -> Result<Candidates> {
    let tree = check_inputs(strategy, snippet)?;
    let ctx = Ctx::new(snippet, &tree, config, strategy.id);
    Ok(strategies::run(strategy.id, &ctx))
}

pub fn is_applicable(
    strategy: &'static Strategy,
    snippet: &SourceSnippet,
    config: &TransformConfig,
) -> Result<Applicability> {
    let found = candidates(strategy, snippet, config)?;
    Ok(match found.reason_if_empty() {
        Some(reason) => Applicability {
            applicable: false,
            sites: Vec::new(),
            reason: Some(reason),
        },
        None => Applicability {
            applicable: true,
            sites: found.sites.iter().map(|s| s.anchor.clone()).collect(),
            reason: None,
        },
    })
}

pub fn apply(
    strategy: &'static Strategy,
    snippet: &SourceSnippet,
    config: &TransformConfig,
) -> Result<TransformOutcome> {
    let found = candidates(strategy, snippet, config)?;
    if let Some(reason) = found.reason_if_empty() {
        return Ok(TransformOutcome::not_applicable(strategy.id, reason));
    }
    let chosen = select_sites(&found, config, strategy.id);
    let mut edits = Vec::new();
    for &i in &chosen {
        edits.extend(found.sites[i].edits.iter().cloned());
    }
    edits.extend(found.shared.iter().cloned());
    let render_err = |detail: String| Error::InternalRenderError {
        strategy: strategy.id,
        id: snippet.id.clone(),
        detail,
    };
    let edits = EditSet::from_edits(edits).map_err(|e| render_err(e.to_string()))?;
    let new_text = apply_edits(&snippet.text, &edits).map_err(|e| render_err(e.to_string()))?;
    let reparsed = parse_text(snippet.language, &new_text)?;
    if has_errors(&reparsed) {
        return Err(render_err("transformed text contains syntax errors".into()));
    }
    let sites = merge_ranges(edits.spans().collect());
    Ok(TransformOutcome {
        strategy: strategy.id.to_string(),
        status: Status::Applied,
        new_text: Some(new_text),
        edits,
        sites,
        reason: None,
    })
}

/// Applies every strategy of `category` defined for the snippet's language,
/// each to the original snippet.
pub fn apply_category(
    category: Category,
    snippet: &SourceSnippet,
    config: &TransformConfig,
) -> Result<Vec<(&'static Strategy, TransformOutcome)>> {
    category
        .strategies()
        .filter(|s| s.supports(snippet.language))
        .map(|s| apply(s, snippet, config).map(|o| (s, o)))
        .collect()
}

fn select_sites(found: &Candidates, config: &TransformConfig, strategy_id: &str) -> Vec<usize> {
    let n = found.sites.len();
    match config.site_policy {
        SitePolicy::First => vec![0],
        SitePolicy::RandomOne => {
            let mut rng = ctx::seeded_rng(config.seed, strategy_id, "site");
            vec![rng.gen_range(0..n)]
        }
        SitePolicy::All => {
            let mut taken: Vec<Range<usize>> =
                found.shared.iter().map(|e| e.span.clone()).collect();
            let mut chosen = Vec::new();
            for (i, site) in found.sites.iter().enumerate() {
                let clash = site.edits.iter().any(|e| {
                    taken
                        .iter()
                        .any(|t| crate::syntax::spans_conflict(t, &e.span))
                });
                if !clash {
                    taken.extend(site.edits.iter().map(|e| e.span.clone()));
                    chosen.push(i);
                }
            }
            chosen
        }
    }
}

fn merge_ranges(mut spans: Vec<Range<usize>>) -> Vec<Range<usize>> {
    spans.sort_by_key(|r| (r.start, r.end));
    let mut out: Vec<Range<usize>> = Vec::new();
    for s in spans {
        match out.last_mut() {
            Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
            _ => out.push(s),
        }
    }
    out
}
