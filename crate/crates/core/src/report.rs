//! Before/after deltas and the table-shaped robustness reports.
//!
//! Category rows take the arithmetic mean of their strategies' scores and
//! recompute imp.% from those means; `T_all` does the same over category
//! rows (or over strategies with [`TallMode::Strategies`]).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::Language;
use crate::transform::{strategy, Category};

pub const T_ALL: &str = "T_all";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPair {
    pub metric: String,
    /// Score without transformation.
    pub before: f64,
    /// Score with transformation.
    pub after: f64,
}

impl EvalPair {
    pub fn new(metric: impl Into<String>, before: f64, after: f64) -> Self {
        EvalPair {
            metric: metric.into(),
            before,
            after,
        }
    }
}

/// `100 * (after - before) / before`; negative means degradation.
pub fn improvement_pct(pair: &EvalPair) -> Result<f64> {
    if pair.before == 0.0 || !pair.before.is_finite() {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * (pair.after - pair.before) / pair.before)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Decrease,
    Increase,
    Unchanged,
}

impl Direction {
    pub fn of(imp_pct: f64) -> Self {
        if imp_pct < 0.0 {
            Direction::Decrease
        } else if imp_pct > 0.0 {
            Direction::Increase
        } else {
            Direction::Unchanged
        }
    }

    pub fn arrow(self) -> &'static str {
        match self {
            Direction::Decrease => "↓",
            Direction::Increase => "↑",
            Direction::Unchanged => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    /// Strategy id, category code or `T_all`.
    pub scope: String,
    pub metric: String,
    pub before: f64,
    pub after: f64,
    pub imp_pct: f64,
    pub direction: Direction,
}

impl DeltaRow {
    pub fn from_pair(scope: impl Into<String>, pair: &EvalPair) -> Result<Self> {
        let imp_pct = improvement_pct(pair)?;
        Ok(DeltaRow {
            scope: scope.into(),
            metric: pair.metric.clone(),
            before: pair.before,
            after: pair.after,
            imp_pct,
            direction: Direction::of(imp_pct),
        })
    }

    fn pair(&self) -> EvalPair {
        EvalPair::new(self.metric.clone(), self.before, self.after)
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn same_metric<'a>(mut metrics: impl Iterator<Item = &'a str>) -> Result<String> {
    let first = metrics.next().unwrap_or_default().to_string();
    match metrics.find(|m| *m != first) {
        Some(other) => Err(Error::ShapeMismatch(format!(
            "mixed metrics `{first}` and `{other}`"
        ))),
        None => Ok(first),
    }
}

fn mean_row(scope: &str, pairs: &[EvalPair]) -> Result<DeltaRow> {
    let metric = same_metric(pairs.iter().map(|p| p.metric.as_str()))?;
    let pair = EvalPair::new(
        metric,
        mean(pairs.iter().map(|p| p.before)),
        mean(pairs.iter().map(|p| p.after)),
    );
    DeltaRow::from_pair(scope, &pair)
}

/// Category a score row belongs to: a strategy id, or a category code for
/// scores already measured per category.
fn scope_category(scope: &str) -> Result<Category> {
    if scope.starts_with("T_") {
        return scope.parse();
    }
    Ok(strategy(scope)?.category)
}

/// Category row from per-strategy scores. Rows of strategies outside the
/// category are ignored; unknown strategy ids are an error. A row scoped to
/// the category code itself counts as one more entry of the mean.
pub fn aggregate_category(rows: &[(String, EvalPair)], category: Category) -> Result<DeltaRow> {
    let mut pairs = Vec::new();
    for (id, pair) in rows {
        if scope_category(id)? == category {
            pairs.push(pair.clone());
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyCategory(category.code().to_string()));
    }
    mean_row(category.code(), &pairs)
}

/// The `T_all` row: mean of the given rows' before/after values.
pub fn overall_row(rows: &[DeltaRow]) -> Result<DeltaRow> {
    if rows.is_empty() {
        return Err(Error::EmptyCategory(T_ALL.to_string()));
    }
    let pairs: Vec<EvalPair> = rows.iter().map(DeltaRow::pair).collect();
    mean_row(T_ALL, &pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Completion,
    Summarization,
    Search,
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "completion" => Ok(Task::Completion),
            "summarization" => Ok(Task::Summarization),
            "search" => Ok(Task::Search),
            _ => Err(Error::InvalidParams(format!("unknown task `{s}`"))),
        }
    }
}

/// Whether `T_all` averages category rows or all strategy rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TallMode {
    #[default]
    Categories,
    Strategies,
}

impl FromStr for TallMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "categories" | "category" => Ok(TallMode::Categories),
            "strategies" | "strategy" => Ok(TallMode::Strategies),
            _ => Err(Error::InvalidParams(format!("unknown T_all mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: Task,
    pub language: Language,
    pub rows: Vec<DeltaRow>,
    pub runs_averaged: usize,
}

/// Builds category rows (in catalog order) and, with at least two of them,
/// a `T_all` row for every metric present in `strategy_rows`.
pub fn build_report(
    task: Task,
    language: Language,
    strategy_rows: &[(String, EvalPair)],
    mode: TallMode,
) -> Result<Report> {
    let mut by_metric: BTreeMap<&str, Vec<(String, EvalPair)>> = BTreeMap::new();
    for (id, pair) in strategy_rows {
        by_metric
            .entry(pair.metric.as_str())
            .or_default()
            .push((id.clone(), pair.clone()));
    }
    let mut rows = Vec::new();
    for group in by_metric.values() {
        let mut cats = Vec::new();
        for c in Category::ALL {
            match aggregate_category(group, c) {
                Ok(r) => cats.push(r),
                Err(Error::EmptyCategory(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if cats.is_empty() {
            continue;
        }
        let all = match mode {
            _ if cats.len() < 2 => None,
            TallMode::Categories => Some(overall_row(&cats)?),
            TallMode::Strategies => {
                let pairs: Vec<EvalPair> = group.iter().map(|(_, p)| p.clone()).collect();
                Some(mean_row(T_ALL, &pairs)?)
            }
        };
        rows.extend(cats);
        rows.extend(all);
    }
    Ok(Report {
        task,
        language,
        rows,
        runs_averaged: 1,
    })
}

/// Element-wise mean of structurally identical reports.
pub fn average_runs(reports: &[Report]) -> Result<Report> {
    let Some(first) = reports.first() else {
        return Err(Error::ShapeMismatch("no reports to average".into()));
    };
    for r in &reports[1..] {
        if r.task != first.task || r.language != first.language {
            return Err(Error::ShapeMismatch("task or language differs".into()));
        }
        let same_rows = r.rows.len() == first.rows.len()
            && r.rows
                .iter()
                .zip(&first.rows)
                .all(|(a, b)| a.scope == b.scope && a.metric == b.metric);
        if !same_rows {
            return Err(Error::ShapeMismatch("row scopes or metrics differ".into()));
        }
    }
    let rows = (0..first.rows.len())
        .map(|i| {
            let pair = EvalPair::new(
                first.rows[i].metric.clone(),
                mean(reports.iter().map(|r| r.rows[i].before)),
                mean(reports.iter().map(|r| r.rows[i].after)),
            );
            DeltaRow::from_pair(first.rows[i].scope.clone(), &pair)
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        task: first.task,
        language: first.language,
        rows,
        runs_averaged: reports.iter().map(|r| r.runs_averaged).sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

/// Rounds half away from zero at `places` decimals. The small nudge keeps
/// values such as 0.805 (stored as 0.80499999...) rounding up.
pub fn round_half_up(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    let scaled = x.abs() * scale;
    let nudged = scaled + scaled.max(1.0) * 1e-12;
    (nudged + 0.5).floor() / scale * x.signum()
}

/// Table cell for an imp.% value: arrow plus magnitude, e.g. `↓ 0.81`.
pub fn pct_cell(imp_pct: f64) -> String {
    let magnitude = round_half_up(imp_pct.abs(), 2);
    match Direction::of(imp_pct) {
        Direction::Unchanged => format!("{magnitude:.2}"),
        d => format!("{} {magnitude:.2}", d.arrow()),
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Csv => render_csv(report)?,
        Format::Markdown => render_markdown(report),
    })
}

fn render_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidParams(format!("csv: {e}"));
    w.write_record(["scope", "metric", "before", "after", "imp_pct", "direction"])
        .map_err(csv_err)?;
    for r in &report.rows {
        let direction = serde_json::to_value(r.direction)?;
        w.write_record([
            r.scope.clone(),
            r.metric.clone(),
            r.before.to_string(),
            r.after.to_string(),
            r.imp_pct.to_string(),
            direction.as_str().unwrap_or_default().to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidParams(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    let mut metrics: Vec<&str> = Vec::new();
    for r in &report.rows {
        if !metrics.contains(&r.metric.as_str()) {
            metrics.push(&r.metric);
        }
    }
    let task = serde_json::to_value(report.task).ok();
    let task = task.as_ref().and_then(|t| t.as_str()).unwrap_or_default();
    let _ = writeln!(
        out,
        "<!-- task: {task}; runs averaged: {} -->",
        report.runs_averaged
    );
    for (i, metric) in metrics.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "| Type | {metric} ({}) w/o t. | w. t. | imp. (%) |",
            report.language
        );
        out.push_str("|---|---:|---:|---:|\n");
        for r in report.rows.iter().filter(|r| r.metric == *metric) {
            let _ = writeln!(
                out,
                "| {} | {:.4} | {:.4} | {} |",
                r.scope,
                r.before,
                r.after,
                pct_cell(r.imp_pct)
            );
        }
    }
    out
}

/// Which side of the comparison a score belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Transformed,
}

/// One line of a score file: a corpus-level metric value for a strategy
/// on either the original or the transformed subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub scope: String,
    pub metric: String,
    pub variant: Variant,
    pub value: f64,
}

/// Pairs original and transformed scores by (scope, metric), in order of
/// first appearance.
pub fn pairs_from_scores(entries: &[ScoreEntry]) -> Result<Vec<(String, EvalPair)>> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut seen: BTreeMap<(String, String), [Option<f64>; 2]> = BTreeMap::new();
    for e in entries {
        let key = (e.scope.clone(), e.metric.clone());
        let slot = seen.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            [None, None]
        });
        let i = match e.variant {
            Variant::Original => 0,
            Variant::Transformed => 1,
        };
        if slot[i].replace(e.value).is_some() {
            return Err(Error::ShapeMismatch(format!(
                "duplicate {:?} score for {} {}",
                e.variant, e.scope, e.metric
            )));
        }
    }
    let mut missing = Vec::new();
    let mut out = Vec::new();
    for key in order {
        match seen[&key] {
            [Some(b), Some(a)] => out.push((key.0.clone(), EvalPair::new(key.1.clone(), b, a))),
            _ => missing.push(format!("{}/{}", key.0, key.1)),
        }
    }
    if !missing.is_empty() {
        return Err(Error::IdMismatch(missing));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn improvement_examples() {
        let imp = improvement_pct(&EvalPair::new("MRR", 0.7243, 0.7185)).unwrap();
        assert!(close(imp, 100.0 * (0.7185 - 0.7243) / 0.7243));
        // -0.8008: the printed 0.81 is within the tables' rounding slack only
        assert_eq!(pct_cell(imp), "↓ 0.80");
        assert!((imp.abs() - 0.81).abs() <= 0.02);
        assert_eq!(
            pct_cell(improvement_pct(&EvalPair::new("MRR", 0.3630, 0.3611)).unwrap()),
            "↓ 0.52"
        );
        assert_eq!(
            improvement_pct(&EvalPair::new("MRR", 0.5, 0.5)).unwrap(),
            0.0
        );
        assert!(matches!(
            improvement_pct(&EvalPair::new("MRR", 0.0, 0.5)),
            Err(Error::ZeroBaseline)
        ));
        assert_eq!(pct_cell(0.35), "↑ 0.35");
        assert_eq!(pct_cell(0.0), "0.00");
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(round_half_up(0.805, 2), 0.81);
        assert_eq!(round_half_up(1.005, 2), 1.01);
        assert_eq!(round_half_up(2.675, 2), 2.68);
        assert_eq!(round_half_up(-0.125, 2), -0.13);
        assert_eq!(round_half_up(0.8049, 2), 0.8);
    }

    fn row(id: &str, b: f64, a: f64) -> (String, EvalPair) {
        (id.to_string(), EvalPair::new("BLEU", b, a))
    }

    #[test]
    fn category_means() {
        let one = aggregate_category(&[row("B-1", 0.5, 0.4)], Category::Block).unwrap();
        assert!(close(one.before, 0.5) && close(one.after, 0.4));
        let two = aggregate_category(
            &[row("GS-1", 0.5, 0.4), row("GS-2", 0.7, 0.6)],
            Category::GrammaticalStatement,
        )
        .unwrap();
        assert!(close(two.before, 0.6) && close(two.after, 0.5));
        assert!(close(two.imp_pct, -100.0 / 6.0));
        assert!(matches!(
            aggregate_category(&[row("B-1", 0.5, 0.4)], Category::Identifier),
            Err(Error::EmptyCategory(_))
        ));
    }

    #[test]
    fn overall_means() {
        let a = DeltaRow::from_pair("T_B", &EvalPair::new("M", 0.6, 0.5)).unwrap();
        let b = DeltaRow::from_pair("T_ID", &EvalPair::new("M", 0.8, 0.8)).unwrap();
        let all = overall_row(&[a.clone(), b]).unwrap();
        assert!(close(all.before, 0.7) && close(all.after, 0.65));
        assert!(close(all.imp_pct, -100.0 * 0.05 / 0.7));
        let single = overall_row(std::slice::from_ref(&a)).unwrap();
        assert_eq!((single.before, single.after), (a.before, a.after));
    }

    #[test]
    fn category_scoped_rows_reproduce_completion_java_t_all() {
        let rows: Vec<(String, EvalPair)> = [
            ("T_B", 0.7243, 0.7185),
            ("T_ID", 0.5925, 0.5295),
            ("T_GS", 0.7201, 0.7082),
            ("T_GT", 0.7180, 0.7107),
            ("T_I", 0.7169, 0.6485),
        ]
        .iter()
        .map(|&(s, b, a)| (s.to_string(), EvalPair::new("MRR", b, a)))
        .collect();
        let r = build_report(
            Task::Completion,
            Language::Java,
            &rows,
            TallMode::Categories,
        )
        .unwrap();
        let all = r.rows.last().unwrap();
        assert_eq!(all.scope, T_ALL);
        assert_eq!(
            format!("{:.4} {:.4}", all.before, all.after),
            "0.6944 0.6631"
        );
        assert!(matches!(
            aggregate_category(
                &[("T_all".into(), EvalPair::new("M", 1.0, 1.0))],
                Category::Block
            ),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn report_has_t_all_only_with_two_categories() {
        let r = build_report(
            Task::Search,
            Language::Java,
            &[row("B-1", 0.5, 0.4)],
            TallMode::Categories,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 1);
        let rows = [
            row("B-1", 0.5, 0.4),
            row("I-1", 0.6, 0.3),
            row("I-2", 0.8, 0.5),
        ];
        let r = build_report(Task::Search, Language::Java, &rows, TallMode::Categories).unwrap();
        assert_eq!(
            r.rows.iter().map(|r| r.scope.as_str()).collect::<Vec<_>>(),
            ["T_B", "T_I", "T_all"]
        );
        assert!(close(r.rows[2].before, (0.5 + 0.7) / 2.0));
        let s = build_report(Task::Search, Language::Java, &rows, TallMode::Strategies).unwrap();
        assert!(close(s.rows[2].before, (0.5 + 0.6 + 0.8) / 3.0));
    }

    fn report(before: f64) -> Report {
        let rows = [row("B-1", before, 0.4), row("I-1", 0.6, 0.3)];
        build_report(
            Task::Summarization,
            Language::Python,
            &rows,
            TallMode::Categories,
        )
        .unwrap()
    }

    #[test]
    fn averaging_runs() {
        let one = average_runs(&[report(0.7)]).unwrap();
        assert_eq!(one, report(0.7));
        let three = average_runs(&[report(0.70), report(0.72), report(0.74)]).unwrap();
        assert_eq!(three.runs_averaged, 3);
        assert!(close(three.rows[0].before, 0.72));
        let mut other = report(0.7);
        other.rows.pop();
        assert!(matches!(
            average_runs(&[report(0.7), other]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip_and_markdown_cells() {
        let r = report(0.7);
        let json = render(&r, Format::Json).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), r);
        let md = render(&r, Format::Markdown).unwrap();
        assert!(md.contains("| T_B | 0.7000 | 0.4000 | ↓ 42.86 |"), "{md}");
        let csv = render(&r, Format::Csv).unwrap();
        assert!(csv.starts_with("scope,metric,before,after,imp_pct,direction\nT_B,BLEU,0.7,0.4,"));
        assert!(matches!(
            "xml".parse::<Format>(),
            Err(Error::UnknownFormat(_))
        ));
    }

    #[test]
    fn score_pairing() {
        let e = |scope: &str, variant, value| ScoreEntry {
            scope: scope.into(),
            metric: "MRR".into(),
            variant,
            value,
        };
        let pairs = pairs_from_scores(&[
            e("B-1", Variant::Transformed, 0.4),
            e("B-1", Variant::Original, 0.5),
        ])
        .unwrap();
        assert_eq!(
            pairs,
            vec![row("B-1", 0.5, 0.4)]
                .into_iter()
                .map(|(s, mut p)| {
                    p.metric = "MRR".into();
                    (s, p)
                })
                .collect::<Vec<_>>()
        );
        assert!(matches!(
            pairs_from_scores(&[e("B-1", Variant::Original, 0.5)]),
            Err(Error::IdMismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn sign_and_scale(b in 0.01f64..100.0, a in 0.0f64..100.0, k in 0.01f64..100.0) {
            let imp = improvement_pct(&EvalPair::new("m", b, a)).unwrap();
            prop_assert_eq!(Direction::of(imp), Direction::of(a - b));
            let scaled = improvement_pct(&EvalPair::new("m", k * b, k * a)).unwrap();
            prop_assert!((imp - scaled).abs() <= 1e-9 * imp.abs().max(1.0));
        }

        #[test]
        fn averaging_is_permutation_invariant(xs in proptest::collection::vec(0.1f64..1.0, 1..5)) {
            let reports: Vec<Report> = xs.iter().map(|&x| report(x)).collect();
            let mut rev = reports.clone();
            rev.reverse();
            let a = average_runs(&reports).unwrap();
            let b = average_runs(&rev).unwrap();
            for (x, y) in a.rows.iter().zip(&b.rows) {
                prop_assert!((x.before - y.before).abs() < 1e-12);
                prop_assert!((x.imp_pct - y.imp_pct).abs() < 1e-9);
            }
        }
    }
}
