//! Pearson correlation of binary variables.
//!
//! For pairs `(r, s)` with cell frequencies `a=(0,0)`, `b=(0,1)`, `c=(1,0)`,
//! `d=(1,1)` the coefficient is `(ad - bc) / sqrt((a+b)(c+d)(a+c)(b+d))`.
//! In this crate `r` is a feature bit and `s` the label.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::types::{Example, MultiDomainSample};

/// Counts of the four `(r, s)` cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub n00: u64,
    pub n01: u64,
    pub n10: u64,
    pub n11: u64,
}

impl PairCounts {
    pub fn from_pairs<I: IntoIterator<Item = (bool, bool)>>(pairs: I) -> Self {
        let mut c = PairCounts::default();
        for (r, s) in pairs {
            match (r, s) {
                (false, false) => c.n00 += 1,
                (false, true) => c.n01 += 1,
                (true, false) => c.n10 += 1,
                (true, true) => c.n11 += 1,
            }
        }
        c
    }

    /// From `total`, label positives, feature ones and joint ones.
    pub fn from_marginals(total: u64, positives: u64, ones: u64, ones_positive: u64) -> Self {
        PairCounts {
            n11: ones_positive,
            n10: ones - ones_positive,
            n01: positives - ones_positive,
            n00: total + ones_positive - ones - positives,
        }
    }

    pub fn total(&self) -> u64 {
        self.n00 + self.n01 + self.n10 + self.n11
    }

    pub fn correlation(&self) -> Option<f64> {
        correlation_from_table(self.n00 as f64, self.n01 as f64, self.n10 as f64, self.n11 as f64)
    }
}

/// Correlation from cell weights (counts or frequencies); `None` when a
/// marginal is degenerate.
pub fn correlation_from_table(a: f64, b: f64, c: f64, d: f64) -> Option<f64> {
    let den = ((a + b) * (c + d)).sqrt() * ((a + c) * (b + d)).sqrt();
    if den == 0.0 {
        return None;
    }
    Some(((a * d - b * c) / den).clamp(-1.0, 1.0))
}

/// Empirical correlation of a list of bit pairs; `Ok(None)` is "undefined"
/// (one of the variables is constant).
pub fn binary_correlation(pairs: &[(bool, bool)]) -> Result<Option<f64>> {
    if pairs.is_empty() {
        return invalid("correlation of an empty list");
    }
    Ok(PairCounts::from_pairs(pairs.iter().copied()).correlation())
}

/// Sample size `⌈2048 ε⁻⁴ v⁻² ln(8/δ)⌉` after which the empirical
/// correlation is within `ε` of the truth with probability `1-δ`, when the
/// label mean lies in `[v, 1-v]`.
pub fn lemma1_sample_bound(eps: f64, v: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("ε must lie in (0,1), got {eps}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("δ must lie in (0,1), got {delta}"));
    }
    if !(v > 0.0 && v <= 0.5) {
        return invalid(format!("v must lie in (0,1/2], got {v}"));
    }
    Ok(lemma1_raw(eps, v, delta).ceil() as u64)
}

/// The bound before rounding up.
pub fn lemma1_raw(eps: f64, v: f64, delta: f64) -> f64 {
    2048.0 / (eps.powi(4) * v * v) * (8.0 / delta).ln()
}

/// Per-dataset empirical correlations of each feature with the label.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    datasets: usize,
    features: usize,
    cells: Vec<Option<f64>>,
}

impl CorrelationTable {
    pub fn from_rows(rows: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let datasets = rows.len();
        let features = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != features) {
            return invalid("ragged correlation rows");
        }
        let cells: Vec<Option<f64>> = rows.into_iter().flatten().collect();
        if cells.iter().flatten().any(|v| !(-1.0..=1.0).contains(v)) {
            return invalid("correlations must lie in [-1, 1]");
        }
        Ok(CorrelationTable { datasets, features, cells })
    }

    pub fn num_datasets(&self) -> usize {
        self.datasets
    }

    pub fn num_features(&self) -> usize {
        self.features
    }

    pub fn get(&self, dataset: usize, feature: usize) -> Option<f64> {
        self.cells[dataset * self.features + feature]
    }

    pub fn column(&self, feature: usize) -> impl Iterator<Item = Option<f64>> + '_ {
        (0..self.datasets).map(move |i| self.get(i, feature))
    }

    /// CSV with one row per dataset and one column per feature (`f1..fn`);
    /// undefined cells are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (1..=self.features).map(|k| format!("f{k}")).collect();
        w.write_record(&header).map_err(io)?;
        for i in 0..self.datasets {
            let row: Vec<String> = (0..self.features)
                .map(|k| self.get(i, k).map(|v| v.to_string()).unwrap_or_default())
                .collect();
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

/// Feature/label counts of one group of examples.
fn feature_counts<'a, I: IntoIterator<Item = &'a Example>>(examples: I, n: usize) -> Vec<PairCounts> {
    let mut total = 0u64;
    let mut positives = 0u64;
    let mut ones = vec![0u64; n];
    let mut ones_pos = vec![0u64; n];
    for e in examples {
        total += 1;
        positives += u64::from(e.y());
        for k in e.x().iter_ones() {
            ones[k] += 1;
            if e.y() {
                ones_pos[k] += 1;
            }
        }
    }
    (0..n)
        .map(|k| PairCounts::from_marginals(total, positives, ones[k], ones_pos[k]))
        .collect()
}

pub fn correlation_table(t: &MultiDomainSample) -> CorrelationTable {
    let groups: Vec<&[Example]> = t.datasets().iter().map(|ds| ds.examples()).collect();
    group_correlation_table(&groups, t.dim())
}

/// Correlation table over arbitrary groups of `n`-dimensional examples,
/// one row per group. Groups may differ in size.
pub fn group_correlation_table(groups: &[&[Example]], n: usize) -> CorrelationTable {
    let cells = groups
        .par_iter()
        .flat_map_iter(|g| feature_counts(g.iter(), n).into_iter().map(|c| c.correlation()))
        .collect();
    CorrelationTable { datasets: groups.len(), features: n, cells }
}

/// Correlations over the concatenation of all datasets.
pub fn pooled_correlations(t: &MultiDomainSample) -> Vec<Option<f64>> {
    group_pooled_correlations(t.examples(), t.dim())
}

pub fn group_pooled_correlations<'a, I: IntoIterator<Item = &'a Example>>(examples: I, n: usize) -> Vec<Option<f64>> {
    feature_counts(examples, n).iter().map(PairCounts::correlation).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;
    use crate::types::Dataset;

    #[test]
    fn perfect_agreement_and_disagreement() {
        let agree = [(false, false), (true, true), (false, false), (true, true)];
        assert_eq!(binary_correlation(&agree).unwrap(), Some(1.0));
        assert_eq!(binary_correlation(&[(false, true), (true, false)]).unwrap(), Some(-1.0));
        assert!(binary_correlation(&[]).is_err());
    }

    #[test]
    fn table_values() {
        assert_eq!(correlation_from_table(0.25, 0.25, 0.25, 0.25), Some(0.0));
        let r = correlation_from_table(0.4, 0.1, 0.1, 0.4).unwrap();
        assert!((r - 0.6).abs() < 1e-15);
    }

    #[test]
    fn constant_variable_is_undefined() {
        assert_eq!(binary_correlation(&[(true, false), (true, true)]).unwrap(), None);
        assert_eq!(binary_correlation(&[(false, true), (true, true)]).unwrap(), None);
    }

    #[test]
    fn lemma1_bound_values() {
        // 2048·16·4·ln 80 = 574360.995…
        assert_eq!(lemma1_sample_bound(0.5, 0.5, 0.1).unwrap(), 574_361);
        let base = lemma1_raw(0.5, 0.5, 0.1);
        assert!((lemma1_raw(0.25, 0.5, 0.1) / base - 16.0).abs() < 1e-12);
        assert!((lemma1_raw(0.5, 0.25, 0.1) / base - 4.0).abs() < 1e-12);
        assert!(lemma1_sample_bound(0.0, 0.5, 0.1).is_err());
        assert!(lemma1_sample_bound(0.5, 0.6, 0.1).is_err());
        assert!(lemma1_sample_bound(0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn table_cells() {
        // feature 0 equals y, feature 1 constant
        let ex = |x: &str, y| crate::types::Example::new(BitVec::from_str01(x).unwrap(), y);
        let ds = Dataset::new(vec![ex("10", true), ex("00", false), ex("10", true), ex("00", false)]).unwrap();
        let t = MultiDomainSample::new(vec![ds]).unwrap();
        let table = correlation_table(&t);
        assert_eq!(table.get(0, 0), Some(1.0));
        assert_eq!(table.get(0, 1), None);
        assert_eq!(pooled_correlations(&t), vec![Some(1.0), None]);

        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "f1,f2\n1,\n");
    }

    #[test]
    fn from_rows_validates() {
        assert!(CorrelationTable::from_rows(vec![vec![Some(1.5)]]).is_err());
        assert!(CorrelationTable::from_rows(vec![vec![None], vec![]]).is_err());
    }
}
