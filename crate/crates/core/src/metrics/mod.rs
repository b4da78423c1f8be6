//! Summarization and retrieval metrics: BLEU, ROUGE-L, METEOR and MRR.
//!
//! All scores are sentence level and lie in `[0, 1]`; corpus scores are the
//! arithmetic mean of instance scores unless corpus-level BLEU is requested.

mod bleu;
pub mod io;
mod lcs;
mod meteor;
mod rouge;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bleu::{bleu, corpus_bleu, BleuParams, Smoothing};
pub use lcs::lcs_len;
pub(crate) use lcs::lcs_pairs;
pub use meteor::{meteor, MeteorParams};
pub use rouge::{rouge_l, RougeParams};

/// Marks a score that was defined by convention rather than computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreFlag {
    EmptyCandidate,
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub flag: Option<ScoreFlag>,
}

impl Score {
    pub(crate) fn ok(value: f64) -> Self {
        Score { value, flag: None }
    }

    pub(crate) fn flagged(flag: ScoreFlag) -> Self {
        Score {
            value: 0.0,
            flag: Some(flag),
        }
    }
}

/// Ranks (1-based) of the true target for each query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankList {
    ranks: Vec<u64>,
}

impl RankList {
    pub fn new(ranks: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = ranks.iter().find(|&&r| r == 0) {
            return Err(Error::InvalidRank(bad));
        }
        Ok(RankList { ranks })
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Mean reciprocal rank.
pub fn mrr(ranks: &RankList) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyRankList);
    }
    let total: f64 = ranks.ranks.iter().map(|&r| 1.0 / r as f64).sum();
    Ok(total / ranks.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Bleu,
    RougeL,
    Meteor,
    Mrr,
}

impl Metric {
    pub const TEXT: [Metric; 3] = [Metric::Bleu, Metric::RougeL, Metric::Meteor];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Bleu => "BLEU",
            Metric::RougeL => "ROUGE-L",
            Metric::Meteor => "METEOR",
            Metric::Mrr => "MRR",
        }
    }

    /// Table rendering: text metrics as percentages with two decimals, MRR
    /// as a fraction with four.
    pub fn render(self, value: f64) -> String {
        match self {
            Metric::Mrr => format!("{value:.4}"),
            _ => format!("{:.2}", value * 100.0),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "bleu" => Ok(Metric::Bleu),
            "rouge-l" | "rougel" | "rouge" => Ok(Metric::RougeL),
            "meteor" => Ok(Metric::Meteor),
            "mrr" => Ok(Metric::Mrr),
            _ => Err(Error::InvalidParams(format!("unknown metric `{s}`"))),
        }
    }
}

/// Parameters for every text metric, defaulted to the toolkit's conventions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub bleu: BleuParams,
    pub rouge: RougeParams,
    pub meteor: MeteorParams,
    /// Pool n-gram statistics over the corpus instead of averaging sentence BLEU.
    #[serde(default)]
    pub corpus_bleu: bool,
}

/// A corpus-level score with its rendered forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    pub metric: Metric,
    pub value: f64,
    pub instances: usize,
    pub flagged: usize,
}

impl CorpusScore {
    pub fn two_decimals(&self) -> String {
        format!("{:.2}", self.value)
    }

    pub fn four_decimals(&self) -> String {
        format!("{:.4}", self.value)
    }

    pub fn table_cell(&self) -> String {
        self.metric.render(self.value)
    }
}

/// Mean of per-instance text-metric scores over `(candidate, reference)` pairs.
pub fn corpus_score<S: AsRef<str>>(
    pairs: &[(Vec<S>, Vec<S>)],
    metric: Metric,
    params: &MetricParams,
) -> Result<CorpusScore> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let views: Vec<(Vec<&str>, Vec<&str>)> = pairs
        .iter()
        .map(|(c, r)| {
            (
                c.iter().map(AsRef::as_ref).collect(),
                r.iter().map(AsRef::as_ref).collect(),
            )
        })
        .collect();
    if metric == Metric::Bleu && params.corpus_bleu {
        let value = corpus_bleu(&views, &params.bleu)?;
        let flagged = views.iter().filter(|(c, _)| c.is_empty()).count();
        return Ok(CorpusScore {
            metric,
            value,
            instances: views.len(),
            flagged,
        });
    }
    let mut total = 0.0;
    let mut flagged = 0;
    for (c, r) in &views {
        let s = match metric {
            Metric::Bleu => bleu(c, r, &params.bleu)?,
            Metric::RougeL => rouge_l(c, r, &params.rouge)?,
            Metric::Meteor => meteor(c, r, &params.meteor)?,
            Metric::Mrr => {
                return Err(Error::InvalidParams(
                    "MRR is computed from rank lists, not token pairs".into(),
                ))
            }
        };
        if s.flag.is_some() {
            flagged += 1;
        }
        total += s.value;
    }
    Ok(CorpusScore {
        metric,
        value: total / views.len() as f64,
        instances: views.len(),
        flagged,
    })
}

/// MRR over a rank list, wrapped as a corpus score.
pub fn corpus_mrr(ranks: &RankList) -> Result<CorpusScore> {
    if ranks.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(CorpusScore {
        metric: Metric::Mrr,
        value: mrr(ranks)?,
        instances: ranks.len(),
        flagged: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mrr_examples() {
        assert_eq!(mrr(&RankList::new(vec![1, 1, 1]).unwrap()).unwrap(), 1.0);
        let v = mrr(&RankList::new(vec![1, 2, 4]).unwrap()).unwrap();
        assert!((v - 7.0 / 12.0).abs() < 1e-15);
        assert!(matches!(
            mrr(&RankList::new(vec![]).unwrap()),
            Err(Error::EmptyRankList)
        ));
        assert!(matches!(RankList::new(vec![0]), Err(Error::InvalidRank(0))));
    }

    #[test]
    fn corpus_mean() {
        let params = MetricParams::default();
        let pair = (vec!["a", "b"], vec!["a", "b"]);
        let one = corpus_score(std::slice::from_ref(&pair), Metric::RougeL, &params).unwrap();
        assert_eq!(one.value, 1.0);
        let two = corpus_score(&[pair.clone(), pair], Metric::Bleu, &params).unwrap();
        assert_eq!(two.value, 1.0);
        let empty: Vec<(Vec<&str>, Vec<&str>)> = vec![];
        assert!(matches!(
            corpus_score(&empty, Metric::Bleu, &params),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn mean_of_two_instances() {
        let params = MetricParams {
            rouge: RougeParams { beta: 1.0 },
            ..Default::default()
        };
        let pairs = vec![
            (vec!["a", "b"], vec!["a", "b", "c", "d"]),
            (vec!["x"], vec!["y"]),
        ];
        let s = corpus_score(&pairs, Metric::RougeL, &params).unwrap();
        // first: R = 0.5, P = 1, F = 2/3 ; second: 0
        assert!((s.value - (2.0 / 3.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rendering_matches_table_style() {
        assert_eq!(Metric::Bleu.render(0.1173), "11.73");
        assert_eq!(Metric::Mrr.render(0.72431), "0.7243");
        let cs = CorpusScore {
            metric: Metric::Mrr,
            value: 0.3,
            instances: 2,
            flagged: 0,
        };
        assert_eq!(cs.two_decimals(), "0.30");
        assert_eq!(cs.four_decimals(), "0.3000");
    }
}
