//! Reconstruction scoring: ROC-AUC over candidate links with mid-rank tie
//! handling, the -log2 display transform, and a rank-sum test used to
//! check weight separation.
//!
//! Candidate links are ranked by score magnitude. Directed truths are
//! evaluated over all ordered off-diagonal pairs; undirected truths over
//! unordered pairs, scoring each pair by the larger magnitude of its two
//! directed entries.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::graphgen::Network;
use crate::methods::ScoreMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub auc: f64,
    pub neg_log2_auc: f64,
    pub n_pos: usize,
    pub n_neg: usize,
}

/// -log2(auc); strictly positive AUC required.
pub fn neg_log2(auc: f64) -> Result<f64> {
    if !(auc > 0.0) || auc > 1.0 {
        return Err(Error::UndefinedMetric(format!(
            "-log2 is defined on (0, 1], got {auc}"
        )));
    }
    Ok(-auc.log2())
}

/// AUC of `scores` against the binary link structure of `truth`,
/// optionally excluding nodes (rows and columns) via `excluded`.
pub fn auc_masked(
    scores: &ScoreMatrix,
    truth: &Network,
    excluded: Option<&[bool]>,
) -> Result<EvalReport> {
    let n = truth.n();
    if scores.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "score matrix is {}x{} but truth has {n} nodes",
            scores.n(),
            scores.n()
        )));
    }
    if let Some(mask) = excluded {
        if mask.len() != n {
            return Err(Error::ShapeMismatch(
                "exclusion mask length differs from node count".into(),
            ));
        }
    }
    let keep = |i: usize| excluded.map_or(true, |m| !m[i]);

    let mut samples: Vec<(f64, bool)> = Vec::new();
    if truth.directed() {
        for i in 0..n {
            for j in 0..n {
                if i != j && keep(i) && keep(j) {
                    samples.push((scores.get(i, j).abs(), truth.adj()[(i, j)] != 0.0));
                }
            }
        }
    } else {
        for i in 0..n {
            for j in (i + 1)..n {
                if keep(i) && keep(j) {
                    let s = scores.get(i, j).abs().max(scores.get(j, i).abs());
                    samples.push((s, truth.adj()[(i, j)] != 0.0));
                }
            }
        }
    }
    auc_from_samples(&samples)
}

/// AUC over every candidate link.
pub fn auc(scores: &ScoreMatrix, truth: &Network) -> Result<EvalReport> {
    auc_masked(scores, truth, None)
}

/// Normalized Mann-Whitney U with mid-rank tie correction.
fn auc_from_samples(samples: &[(f64, bool)]) -> Result<EvalReport> {
    let n_pos = samples.iter().filter(|(_, p)| *p).count();
    let n_neg = samples.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(format!(
            "AUC needs at least one link and one non-link, got {n_pos} / {n_neg}"
        )));
    }
    let ranks = midranks(samples.iter().map(|&(s, _)| s));
    let rank_sum: f64 = samples
        .iter()
        .zip(ranks.iter())
        .filter(|((_, p), _)| *p)
        .map(|(_, &r)| r)
        .sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    let auc = u / (n_pos as f64 * n_neg as f64);
    Ok(EvalReport {
        auc,
        neg_log2_auc: neg_log2(auc)?,
        n_pos,
        n_neg,
    })
}

/// Ascending mid-ranks (1-based); tied values share their average rank.
fn midranks<I: Iterator<Item = f64>>(values: I) -> Vec<f64> {
    let vals: Vec<f64> = values.collect();
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut ranks = vec![0.0; vals.len()];
    let mut k = 0;
    while k < order.len() {
        let mut end = k + 1;
        while end < order.len() && vals[order[end]] == vals[order[k]] {
            end += 1;
        }
        let avg = (k + 1 + end) as f64 / 2.0;
        for &idx in &order[k..end] {
            ranks[idx] = avg;
        }
        k = end;
    }
    ranks
}

/// One-sided Mann-Whitney rank-sum test of H1: values in `smaller` are
/// stochastically smaller than values in `larger`. Returns the
/// normal-approximation p-value with tie correction.
pub fn rank_sum_one_sided(smaller: &[f64], larger: &[f64]) -> Result<f64> {
    let n1 = smaller.len();
    let n2 = larger.len();
    if n1 == 0 || n2 == 0 {
        return Err(Error::UndefinedMetric(
            "rank-sum test needs both groups non-empty".into(),
        ));
    }
    let pooled: Vec<f64> = smaller.iter().chain(larger.iter()).copied().collect();
    let ranks = midranks(pooled.iter().copied());
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;

    let n = (n1 + n2) as f64;
    let mean = n1 as f64 * n2 as f64 / 2.0;
    // Tie-corrected variance.
    let mut tie_term = 0.0;
    let mut sorted = pooled;
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut k = 0;
    while k < sorted.len() {
        let mut end = k + 1;
        while end < sorted.len() && sorted[end] == sorted[k] {
            end += 1;
        }
        let t = (end - k) as f64;
        tie_term += t * t * t - t;
        k = end;
    }
    let var = (n1 as f64 * n2 as f64 / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        // Every value tied: no evidence either way.
        return Ok(0.5);
    }
    let z = (u1 - mean + 0.5) / var.sqrt();
    // P(Z <= z) for the one-sided "smaller" alternative.
    Ok(0.5 * erfc(-z / std::f64::consts::SQRT_2))
}
