//! `codemorph`: transform code corpora and report model robustness.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

const AFTER_HELP: &str = "\
Exit codes:
  0  success (for `apply`, the strategy was applied)
  1  fatal error: unreadable input, malformed data, id mismatch, failed verification
  2  usage error
  3  `apply` only: the strategy is not applicable to the input (reason on stderr)

Strategy counts:
  The catalog has 32 strategies in five categories: 28 are defined for Java
  and 25 for Python. Counts of 24 and 27 (Java, Python), or the same pair in
  the opposite order, also circulate for this strategy set. They do not match
  the per-strategy language table, which is what this tool implements. Run
  `codemorph list` to see which languages each strategy supports.

Logging goes to stderr and is controlled by RUST_LOG (default `warn`).
Grammars are built in; set CODEMORPH_GRAMMAR_DIR to load shared-library
grammars from a directory instead.";

#[derive(Debug, Parser)]
#[command(
    name = "codemorph",
    version,
    about = "Semantic-preserving transformations of Java and Python code, for measuring how robust code models are",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the strategy catalog.
    List(ListArgs),
    /// Apply one strategy to a source file.
    Apply(ApplyArgs),
    /// Transform every record of a JSONL corpus.
    Batch(BatchArgs),
    /// Keep the corpus records on which the selected strategies apply.
    Filter(FilterArgs),
    /// Print the depth-first token sequence of a file or corpus.
    Tokens(TokensArgs),
    /// Check that a transformed file parses and show how its tokens differ.
    Verify(VerifyArgs),
    /// Score predictions against references (BLEU, ROUGE-L, METEOR) or ranks (MRR).
    Metrics(MetricsArgs),
    /// Build a before/after robustness report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[arg(long, short)]
    pub language: Option<String>,
    #[arg(long, short)]
    pub category: Option<String>,
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

/// Exactly one of `--strategy` and `--category`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Selector {
    /// Strategy id, e.g. GS-7.
    #[arg(long, short)]
    pub strategy: Option<String>,
    /// Category code, e.g. T_GS; every strategy of the category is applied.
    #[arg(long, short)]
    pub category: Option<String>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// all, first or random-one.
    #[arg(long, default_value = "all")]
    pub site_policy: String,
    /// Where ID-1/ID-2 insert: front, middle or end.
    #[arg(long, default_value = "middle")]
    pub insert_location: String,
    /// Fixed junk snippet for ID-2 instead of a seeded choice.
    #[arg(long)]
    pub junk_template: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    pub input: PathBuf,
    #[arg(long, short)]
    pub strategy: String,
    /// Inferred from the file extension when omitted.
    #[arg(long, short)]
    pub language: Option<String>,
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Write the transformed source here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    pub corpus: PathBuf,
    #[command(flatten)]
    pub selector: Selector,
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Transformed JSONL output.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Manifest path; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, short)]
    pub jobs: Option<usize>,
    /// Fail on the first malformed line or failing record.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    pub corpus: PathBuf,
    #[command(flatten)]
    pub selector: Selector,
    #[arg(long, short)]
    pub language: String,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Write stats JSON here instead of stderr.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct TokensArgs {
    /// A source file, or a JSONL corpus with `--corpus`.
    pub input: PathBuf,
    #[arg(long)]
    pub corpus: bool,
    #[arg(long, short)]
    pub language: Option<String>,
    /// Drop non-ASCII tokens and spell out operators, as for code search.
    #[arg(long)]
    pub search: bool,
    /// Leave comments out of the sequence.
    #[arg(long)]
    pub code_only: bool,
    /// With `--corpus`: split sequences longer than this into `#k` chunks.
    #[arg(long)]
    pub split: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub original: PathBuf,
    pub transformed: PathBuf,
    #[arg(long, short)]
    pub language: Option<String>,
    /// Shell command run on the transformed text; `{}` is replaced by a temp file path.
    #[arg(long)]
    pub verify_cmd: Option<String>,
    #[arg(long)]
    pub code_only: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Candidate token file (JSONL `id`/`tokens`, or one tokenized line per instance).
    #[arg(long, conflicts_with = "ranks", requires = "references")]
    pub candidates: Option<PathBuf>,
    #[arg(long)]
    pub references: Option<PathBuf>,
    /// Rank file (JSONL `id`/`rank`, or one rank per line); computes MRR.
    #[arg(long, required_unless_present = "candidates")]
    pub ranks: Option<PathBuf>,
    /// Comma-separated subset of bleu, rouge-l, meteor.
    #[arg(long, value_delimiter = ',', default_value = "bleu,rouge-l,meteor")]
    pub metric: Vec<String>,
    /// Pool BLEU statistics over the corpus instead of averaging sentence scores.
    #[arg(long)]
    pub corpus_bleu: bool,
    /// Emit score-file lines (`scope`, `metric`, `variant`, `value`) for `report --scores`.
    #[arg(long, requires = "variant")]
    pub scope: Option<String>,
    /// original or transformed.
    #[arg(long, requires = "scope")]
    pub variant: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub task: String,
    #[arg(long, short)]
    pub language: String,
    /// Score files from `metrics --scope --variant`; several files are
    /// treated as runs and averaged.
    #[arg(long, num_args = 1.., conflicts_with_all = ["scope", "original", "transformed"])]
    pub scores: Vec<PathBuf>,
    /// Strategy id or category code of the next `--original`/`--transformed` pair.
    #[arg(long)]
    pub scope: Vec<String>,
    /// Predictions on the original code (token or rank file).
    #[arg(long)]
    pub original: Vec<PathBuf>,
    /// Predictions on the transformed code.
    #[arg(long)]
    pub transformed: Vec<PathBuf>,
    /// References for token predictions; without it the files are rank files.
    #[arg(long)]
    pub references: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "bleu,rouge-l,meteor")]
    pub metric: Vec<String>,
    #[arg(long)]
    pub corpus_bleu: bool,
    /// json, csv or markdown.
    #[arg(long, short, default_value = "markdown")]
    pub format: String,
    /// Average T_all over categories or over strategies.
    #[arg(long, default_value = "categories")]
    pub tall_mode: String,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<commands::UsageError>().is_some();
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
