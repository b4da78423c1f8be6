use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Score, ScoreFlag};
use crate::error::{Error, Result};

/// Exact-match METEOR constants. No stemming or synonym modules are used, so
/// scores are lower than those of the reference METEOR tool on paraphrases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorParams {
    /// Harmonic-mean weight: `Fmean = P*R / (alpha*P + (1-alpha)*R)`.
    pub alpha: f64,
    /// Fragmentation penalty scale.
    pub gamma: f64,
    /// Fragmentation penalty exponent.
    pub beta: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        MeteorParams {
            alpha: 0.9,
            gamma: 0.5,
            beta: 3.0,
        }
    }
}

impl MeteorParams {
    fn validate(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.alpha < 1.0
            && self.gamma > 0.0
            && self.gamma <= 1.0
            && self.beta > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "invalid METEOR constants {self:?}"
            )))
        }
    }
}

pub fn meteor(candidate: &[&str], reference: &[&str], params: &MeteorParams) -> Result<Score> {
    params.validate()?;
    if candidate.is_empty() || reference.is_empty() {
        return Ok(Score::flagged(ScoreFlag::EmptyInput));
    }
    // Leftmost alignment: candidate tokens left to right each claim the
    // earliest unclaimed reference position holding the same token.
    let mut slots: HashMap<&str, VecDeque<usize>> = HashMap::new();
    for (j, t) in reference.iter().enumerate() {
        slots.entry(t).or_default().push_back(j);
    }
    let mut matched = 0usize;
    let mut chunks = 0usize;
    let mut last: Option<usize> = None;
    for t in candidate {
        match slots.get_mut(t).and_then(VecDeque::pop_front) {
            Some(j) => {
                matched += 1;
                if last.is_none_or(|p| p + 1 != j) {
                    chunks += 1;
                }
                last = Some(j);
            }
            None => last = None,
        }
    }
    if matched == 0 {
        return Ok(Score::ok(0.0));
    }
    let m = matched as f64;
    let precision = m / candidate.len() as f64;
    let recall = m / reference.len() as f64;
    let fmean = precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
    let penalty = params.gamma * (chunks as f64 / m).powf(params.beta);
    Ok(Score::ok(fmean * (1.0 - penalty)))
}
