use serde::{Deserialize, Serialize};

use super::lcs::lcs_len;
use super::{Score, ScoreFlag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RougeParams {
    pub beta: f64,
}

impl Default for RougeParams {
    fn default() -> Self {
        RougeParams { beta: 1.2 }
    }
}

/// LCS-based F-measure; recall is measured against the reference.
pub fn rouge_l(candidate: &[&str], reference: &[&str], params: &RougeParams) -> Result<Score> {
    if !params.beta.is_finite() || params.beta <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "ROUGE-L beta must be positive (got {})",
            params.beta
        )));
    }
    if candidate.is_empty() || reference.is_empty() {
        return Ok(Score::flagged(ScoreFlag::EmptyInput));
    }
    let lcs = lcs_len(candidate, reference) as f64;
    if lcs == 0.0 {
        return Ok(Score::ok(0.0));
    }
    let recall = lcs / reference.len() as f64;
    let precision = lcs / candidate.len() as f64;
    let b2 = params.beta * params.beta;
    Ok(Score::ok(
        (1.0 + b2) * recall * precision / (recall + b2 * precision),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        // LCS = 2, R = 1, P = 2/3, F = 2.44 * (2/3) / (1 + 1.44 * 2/3)
        let s = rouge_l(&["a", "b", "c"], &["a", "c"], &RougeParams::default()).unwrap();
        let expected = 2.44 * (2.0 / 3.0) / (1.0 + 1.44 * (2.0 / 3.0));
        assert!((s.value - expected).abs() < 1e-15);
        assert!((s.value - 0.8299).abs() < 5e-5);
    }

    #[test]
    fn bounds() {
        let p = RougeParams::default();
        assert_eq!(rouge_l(&["a", "b"], &["a", "b"], &p).unwrap().value, 1.0);
        assert_eq!(rouge_l(&["a"], &["b"], &p).unwrap().value, 0.0);
        let e = rouge_l(&[], &["b"], &p).unwrap();
        assert_eq!((e.value, e.flag), (0.0, Some(ScoreFlag::EmptyInput)));
        assert!(rouge_l(&["a"], &["a"], &RougeParams { beta: 0.0 }).is_err());
    }
}
