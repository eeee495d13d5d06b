//! Tie-aware Spearman rank correlation.
//!
//! Frequency data over verb lemmas is tie-heavy, and the familiar
//! `1 - 6*sum(d^2)/(n(n^2-1))` identity is biased as soon as ties appear. We
//! therefore rank with average ranks (each tied block receives the mean of
//! the positional ranks it spans) and return the Pearson correlation of the
//! two rank vectors, which is the tie-correct definition.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("rank correlation needs at least two candidates")]
    TooFewCandidates,
    #[error("ranks of population {0} are all tied; rho is undefined")]
    DegenerateRanks(String),
}

/// Correlation of two populations over one shared candidate list.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationResult {
    pub pair: (String, String),
    pub rho: f64,
    pub n: usize,
}

/// Average ranks of `values`, ranked descending: the largest value gets rank
/// 1, and a tied block spanning positions `i..j` (1-based) gets `(i+j)/2`.
pub fn average_ranks_desc(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // descending; NaN never occurs for count data
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());

    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i+1 ..= j+1 share the average rank
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return None;
    }
    Some(cov / (var_x * var_y).sqrt())
}

/// Tie-corrected Spearman rho between two frequency vectors laid out over the
/// same candidate list. `labels` name the populations for error reporting.
pub fn spearman_rho(
    freq_a: &[f64],
    freq_b: &[f64],
    labels: (&str, &str),
) -> Result<f64, StatsError> {
    assert_eq!(freq_a.len(), freq_b.len(), "frequency vectors must align");
    if freq_a.len() < 2 {
        return Err(StatsError::TooFewCandidates);
    }
    let ranks_a = average_ranks_desc(freq_a);
    let ranks_b = average_ranks_desc(freq_b);

    let all_tied = |r: &[f64]| r.iter().all(|&v| v == r[0]);
    if all_tied(&ranks_a) {
        return Err(StatsError::DegenerateRanks(labels.0.to_string()));
    }
    if all_tied(&ranks_b) {
        return Err(StatsError::DegenerateRanks(labels.1.to_string()));
    }

    // variance of a non-degenerate rank vector is never zero
    Ok(pearson(&ranks_a, &ranks_b).expect("non-degenerate ranks have positive variance"))
}
