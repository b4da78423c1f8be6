//! Brute-force reference implementations of the evaluation metrics.
//!
//! These deliberately avoid the dynamic-programming and hashing shortcuts
//! used by the library so they can serve as independent checks.
#![allow(dead_code)]

/// Every n-gram of `tokens`, as owned vectors, in order of occurrence.
pub fn ngrams(tokens: &[&str], n: usize) -> Vec<Vec<String>> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n)
        .map(|i| tokens[i..i + n].iter().map(|s| s.to_string()).collect())
        .collect()
}

/// Clipped n-gram matches by pairing each candidate n-gram with a distinct
/// unused reference occurrence.
pub fn clipped_matches(cand: &[&str], refr: &[&str], n: usize) -> (usize, usize) {
    let c = ngrams(cand, n);
    let r = ngrams(refr, n);
    let mut used = vec![false; r.len()];
    let mut hits = 0;
    for g in &c {
        if let Some(j) = (0..r.len()).find(|&j| !used[j] && r[j] == *g) {
            used[j] = true;
            hits += 1;
        }
    }
    (hits, c.len())
}

pub fn bleu(
    cand: &[&str],
    refr: &[&str],
    max_n: usize,
    weights: &[f64],
    add_one_from_2: bool,
) -> f64 {
    if cand.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let w = weights[n - 1];
        if w == 0.0 {
            continue;
        }
        let (hits, total) = clipped_matches(cand, refr, n);
        let p = if add_one_from_2 && n >= 2 {
            (hits as f64 + 1.0) / (total as f64 + 1.0)
        } else if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        if p == 0.0 {
            return 0.0;
        }
        log_sum += w * p.ln();
    }
    let bp = if cand.len() >= refr.len() {
        1.0
    } else {
        (1.0 - refr.len() as f64 / cand.len() as f64).exp()
    };
    bp * log_sum.exp()
}

/// Length of the longest common subsequence by enumerating every subsequence
/// of the shorter list (exponential; only for short inputs).
pub fn lcs_brute(a: &[&str], b: &[&str]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    assert!(short.len() <= 16, "oracle is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let sub: Vec<&str> = (0..short.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| short[i])
            .collect();
        if sub.len() > best && is_subsequence(&sub, long) {
            best = sub.len();
        }
    }
    best
}

fn is_subsequence(sub: &[&str], seq: &[&str]) -> bool {
    let mut it = seq.iter();
    sub.iter().all(|s| it.any(|t| t == s))
}

pub fn rouge_l(cand: &[&str], refr: &[&str], beta: f64) -> f64 {
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }
    let l = lcs_brute(cand, refr) as f64;
    if l == 0.0 {
        return 0.0;
    }
    let r = l / refr.len() as f64;
    let p = l / cand.len() as f64;
    let b2 = beta * beta;
    (1.0 + b2) * r * p / (r + b2 * p)
}

/// Exact-match METEOR with leftmost alignment: each candidate token, left to
/// right, takes the leftmost reference occurrence not yet taken.
pub fn meteor(cand: &[&str], refr: &[&str]) -> f64 {
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }
    let mut taken = vec![false; refr.len()];
    let mut align: Vec<Option<usize>> = Vec::new();
    for c in cand {
        let mut hit = None;
        for (j, r) in refr.iter().enumerate() {
            if !taken[j] && r == c {
                taken[j] = true;
                hit = Some(j);
                break;
            }
        }
        align.push(hit);
    }
    let m = align.iter().filter(|a| a.is_some()).count();
    if m == 0 {
        return 0.0;
    }
    // a chunk starts at every matched candidate token that does not directly
    // continue the previous token's match
    let mut chunks = 0;
    for i in 0..align.len() {
        if let Some(j) = align[i] {
            let continues = i > 0 && j > 0 && align[i - 1] == Some(j - 1);
            if !continues {
                chunks += 1;
            }
        }
    }
    let p = m as f64 / cand.len() as f64;
    let r = m as f64 / refr.len() as f64;
    let fmean = 10.0 * p * r / (r + 9.0 * p);
    let penalty = 0.5 * (chunks as f64 / m as f64).powi(3);
    fmean * (1.0 - penalty)
}

pub fn mrr(ranks: &[u64]) -> f64 {
    let mut total = 0.0;
    for &r in ranks {
        total += 1.0 / r as f64;
    }
    total / ranks.len() as f64
}
