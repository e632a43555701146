//! Per-feature `(|pooled ρ̂|, stdev)` points with the selection under a
//! given `α` and feature count.

use serde::Serialize;

use mdlearn::featsel::{correlation_stdevs, fsus_scores, select_top, CorrelationTable};

use crate::BenchError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatterRow {
    pub feature: usize,
    pub pooled_abs: Option<f64>,
    pub stdev: Option<f64>,
    pub score: f64,
    pub selected: bool,
}

pub fn emit_scatter(
    table: &CorrelationTable,
    pooled: &[Option<f64>],
    alpha: f64,
    count: usize,
) -> Result<Vec<ScatterRow>, BenchError> {
    let scores = fsus_scores(table, pooled, alpha)?;
    let selected = select_top(&scores, count)?;
    let stdevs = correlation_stdevs(table);
    Ok((0..scores.len())
        .map(|k| ScatterRow {
            feature: k,
            pooled_abs: pooled[k].map(f64::abs),
            stdev: stdevs[k],
            score: scores[k],
            selected: selected.binary_search(&k).is_ok(),
        })
        .collect())
}

pub fn write_scatter_csv<W: std::io::Write>(rows: &[ScatterRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> (CorrelationTable, Vec<Option<f64>>) {
        let rows = vec![
            vec![Some(0.6), Some(0.5), Some(0.1), None],
            vec![Some(0.0), Some(0.5), Some(-0.1), None],
        ];
        (CorrelationTable::from_rows(rows).unwrap(), vec![Some(0.3), Some(0.5), Some(0.0), None])
    }

    #[test]
    fn alpha_zero_selects_by_pooled_magnitude() {
        let (t, p) = table();
        let rows = emit_scatter(&t, &p, 0.0, 2).unwrap();
        let sel: Vec<usize> = rows.iter().filter(|r| r.selected).map(|r| r.feature).collect();
        assert_eq!(sel, vec![0, 1]);
    }

    #[test]
    fn stable_strong_feature_survives_any_alpha() {
        let (t, p) = table();
        for alpha in [0.0, 1.0, 10.0, 1e6] {
            let rows = emit_scatter(&t, &p, alpha, 1).unwrap();
            assert!(rows[1].selected);
            assert_eq!(rows[1].stdev, Some(0.0));
        }
    }

    #[test]
    fn selection_boundary_is_consistent() {
        let (t, p) = table();
        let rows = emit_scatter(&t, &p, 2.0, 2).unwrap();
        let worst_in = rows.iter().filter(|r| r.selected).map(|r| r.score).fold(f64::INFINITY, f64::min);
        let best_out = rows.iter().filter(|r| !r.selected).map(|r| r.score).fold(f64::NEG_INFINITY, f64::max);
        assert!(worst_in >= best_out);
        assert_eq!(rows[3].score, f64::NEG_INFINITY);
        assert_eq!(rows[3].pooled_abs, None);
    }
}
