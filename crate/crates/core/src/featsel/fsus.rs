//! Stability-regularized feature scoring.
//!
//! `s_k = |ρ̂_k| - α · stdev_i(ρ̂ᵢ_k)` rewards features whose pooled
//! correlation is strong and penalizes those whose per-domain correlation
//! varies. `α = 0` is the plain pooled-correlation ranking.

use crate::error::{invalid, Result};

use super::correlation::CorrelationTable;

/// Population standard deviation, shifted by the first entry so that equal
/// entries give exactly 0.
fn population_stdev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let shift = values[0];
    let mean = values.iter().map(|v| v - shift).sum::<f64>() / n;
    let second = values.iter().map(|v| (v - shift).powi(2)).sum::<f64>() / n;
    (second - mean * mean).max(0.0).sqrt()
}

/// Per-feature stdev of the defined per-dataset correlations; `None` when
/// no entry is defined.
pub fn correlation_stdevs(table: &CorrelationTable) -> Vec<Option<f64>> {
    (0..table.num_features())
        .map(|k| {
            let defined: Vec<f64> = table.column(k).flatten().collect();
            (!defined.is_empty()).then(|| population_stdev(&defined))
        })
        .collect()
}

/// Scores; features without any defined per-dataset entry get `-∞`. An
/// undefined pooled correlation counts as 0.
pub fn fsus_scores(table: &CorrelationTable, pooled: &[Option<f64>], alpha: f64) -> Result<Vec<f64>> {
    if !(alpha >= 0.0) {
        return invalid(format!("α must be non-negative, got {alpha}"));
    }
    if pooled.len() != table.num_features() {
        return invalid("pooled correlations and table disagree on feature count");
    }
    Ok(correlation_stdevs(table)
        .into_iter()
        .zip(pooled)
        .map(|(sd, p)| match sd {
            None => f64::NEG_INFINITY,
            Some(sd) => p.map_or(0.0, f64::abs) - alpha * sd,
        })
        .collect())
}

/// Features in decreasing score order, ties to the smaller index.
pub fn rank_features(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

/// Indices of the `count` largest scores, returned in increasing index order.
pub fn select_top(scores: &[f64], count: usize) -> Result<Vec<usize>> {
    if count == 0 || count > scores.len() {
        return invalid(format!("cannot select {count} of {} features", scores.len()));
    }
    let mut chosen = rank_features(scores);
    chosen.truncate(count);
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(entries: &[Option<f64>]) -> CorrelationTable {
        CorrelationTable::from_rows(entries.iter().map(|e| vec![*e]).collect()).unwrap()
    }

    #[test]
    fn alpha_zero_is_pooled_magnitude() {
        let t = column(&[Some(0.4), Some(-0.1)]);
        assert_eq!(fsus_scores(&t, &[Some(-0.3)], 0.0).unwrap(), vec![0.3]);
    }

    #[test]
    fn equal_entries_have_no_penalty() {
        let t = column(&[Some(0.2), Some(0.2), Some(0.2)]);
        assert_eq!(fsus_scores(&t, &[Some(0.25)], 5.0).unwrap(), vec![0.25]);
    }

    #[test]
    fn hand_computed_penalty() {
        // entries {0.4, 0, 0.4, 0}: population stdev 0.2
        let t = column(&[Some(0.4), Some(0.0), Some(0.4), Some(0.0)]);
        let s = fsus_scores(&t, &[Some(0.2)], 2.0).unwrap()[0];
        assert!((s - (-0.2)).abs() < 1e-15);
    }

    #[test]
    fn undefined_entries() {
        let none = column(&[None, None]);
        assert_eq!(fsus_scores(&none, &[None], 1.0).unwrap(), vec![f64::NEG_INFINITY]);
        let one = column(&[None, Some(0.7)]);
        assert_eq!(fsus_scores(&one, &[Some(0.5)], 3.0).unwrap(), vec![0.5]);
        assert!(fsus_scores(&one, &[Some(0.5)], -1.0).is_err());
    }

    #[test]
    fn select_top_examples() {
        assert_eq!(select_top(&[0.9, 0.1, 0.9], 2).unwrap(), vec![0, 2]);
        assert_eq!(select_top(&[0.3, 0.1, 0.2], 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(select_top(&[0.3, 0.8, 0.2], 1).unwrap(), vec![1]);
        assert_eq!(select_top(&[0.5, 0.5, 0.5], 1).unwrap(), vec![0]);
        assert!(select_top(&[0.1], 0).is_err());
        assert!(select_top(&[0.1], 2).is_err());
    }
}
