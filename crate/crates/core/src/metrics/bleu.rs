use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Score, ScoreFlag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    None,
    /// Add one to numerator and denominator of every precision with n >= 2.
    AddOneFromBigrams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuParams {
    pub max_n: usize,
    pub weights: Vec<f64>,
    pub smoothing: Smoothing,
}

impl Default for BleuParams {
    fn default() -> Self {
        BleuParams::uniform(4, Smoothing::AddOneFromBigrams)
    }
}

impl BleuParams {
    pub fn uniform(max_n: usize, smoothing: Smoothing) -> Self {
        BleuParams {
            max_n,
            weights: vec![1.0 / max_n as f64; max_n],
            smoothing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 {
            return Err(Error::InvalidParams("BLEU max_n must be >= 1".into()));
        }
        if self.weights.len() != self.max_n {
            return Err(Error::InvalidParams(format!(
                "BLEU needs {} weights, got {}",
                self.max_n,
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidParams("BLEU weights must be >= 0".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "BLEU weights must sum to 1 (got {sum})"
            )));
        }
        Ok(())
    }
}

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// (clipped matches, candidate n-gram count) for one order.
fn matches<'a>(cand: &'a [&'a str], refr: &'a [&'a str], n: usize) -> (usize, usize) {
    let c = ngram_counts(cand, n);
    let r = ngram_counts(refr, n);
    let hits = c
        .iter()
        .map(|(g, &k)| k.min(r.get(g).copied().unwrap_or(0)))
        .sum();
    (hits, cand.len().saturating_sub(n - 1))
}

fn combine(stats: &[(usize, usize)], cand_len: usize, ref_len: usize, params: &BleuParams) -> f64 {
    let mut log_sum = 0.0;
    for (i, (&(hits, total), &w)) in stats.iter().zip(&params.weights).enumerate() {
        if w == 0.0 {
            continue;
        }
        let n = i + 1;
        let p = match params.smoothing {
            Smoothing::AddOneFromBigrams if n >= 2 => (hits as f64 + 1.0) / (total as f64 + 1.0),
            _ if total == 0 => 0.0,
            _ => hits as f64 / total as f64,
        };
        if p == 0.0 {
            return 0.0;
        }
        log_sum += w * p.ln();
    }
    let brevity = if cand_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    };
    brevity * log_sum.exp()
}

/// Sentence BLEU of `candidate` against a single `reference`.
pub fn bleu(candidate: &[&str], reference: &[&str], params: &BleuParams) -> Result<Score> {
    params.validate()?;
    if candidate.is_empty() {
        return Ok(Score::flagged(ScoreFlag::EmptyCandidate));
    }
    let stats: Vec<_> = (1..=params.max_n)
        .map(|n| matches(candidate, reference, n))
        .collect();
    Ok(Score::ok(combine(
        &stats,
        candidate.len(),
        reference.len(),
        params,
    )))
}

/// Corpus BLEU: n-gram statistics and lengths are pooled before combining.
pub fn corpus_bleu(pairs: &[(Vec<&str>, Vec<&str>)], params: &BleuParams) -> Result<f64> {
    params.validate()?;
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut stats = vec![(0usize, 0usize); params.max_n];
    let (mut cand_len, mut ref_len) = (0, 0);
    for (c, r) in pairs {
        cand_len += c.len();
        ref_len += r.len();
        for (n, slot) in (1..=params.max_n).zip(stats.iter_mut()) {
            let (h, t) = matches(c, r, n);
            slot.0 += h;
            slot.1 += t;
        }
    }
    if cand_len == 0 {
        return Ok(0.0);
    }
    Ok(combine(&stats, cand_len, ref_len, params))
}
