//! K-domain cross-validation of feature selectors.
//!
//! For every K-subset of the training domains: score features on the
//! subset (one dataset per domain), keep the top `count`, train a
//! classifier on the selected features and measure balanced error on each
//! domain outside the subset.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use mdlearn::eval::class_errors;
use mdlearn::featsel::{
    centroid_train, fsus_scores, group_correlation_table, group_pooled_correlations, knn_train, select_top,
};
use mdlearn::{Example, Hypothesis, Oracle};

use crate::corpus::DomainData;
use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selector {
    /// Rank by pooled `|ρ̂|`.
    Baseline,
    Fsus(f64),
}

impl Selector {
    pub fn alpha(self) -> f64 {
        match self {
            Selector::Baseline => 0.0,
            Selector::Fsus(a) => a,
        }
    }

    pub fn label(self) -> String {
        match self {
            Selector::Baseline => "baseline".into(),
            Selector::Fsus(a) => format!("fsus{a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifierKind {
    Knn(usize),
    Centroid,
}

impl ClassifierKind {
    pub fn label(self) -> String {
        match self {
            ClassifierKind::Knn(k) => format!("knn{k}"),
            ClassifierKind::Centroid => "centroid".into(),
        }
    }

    fn train(self, sample: &[Example]) -> mdlearn::Result<Hypothesis> {
        match self {
            ClassifierKind::Knn(k) => knn_train(sample, k),
            ClassifierKind::Centroid => centroid_train(sample),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XvalRow {
    pub count: usize,
    /// Mean over evaluated (subset, held-out domain) pairs.
    pub mean_balanced_error: Option<f64>,
    pub pairs: usize,
    pub skipped: usize,
}

/// Subset/domain pairs that could not be evaluated, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct Skip {
    pub subset: Vec<usize>,
    pub held_out: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct XvalTable {
    pub rows: Vec<XvalRow>,
    pub skips: Vec<Skip>,
}

fn has_both_classes(examples: &[Example]) -> bool {
    examples.iter().any(|e| e.y()) && examples.iter().any(|e| !e.y())
}

/// `excluded` domains are evaluated but never used for training.
pub fn cross_domain_validation(
    domains: &[DomainData],
    k: usize,
    excluded: &[usize],
    selector: Selector,
    counts: &[usize],
    classifier: ClassifierKind,
) -> Result<XvalTable, BenchError> {
    let trainable: Vec<usize> = (0..domains.len()).filter(|z| !excluded.contains(z)).collect();
    if k == 0 || k > trainable.len() || k >= domains.len() {
        return Err(BenchError::Config(format!(
            "need 1 ≤ K ≤ {} and at least one domain to hold out",
            trainable.len()
        )));
    }
    let n = domains.first().and_then(|d| d.examples.first()).map(Example::dim).unwrap_or(0);
    if n == 0 || domains.iter().any(|d| d.examples.iter().any(|e| e.dim() != n)) {
        return Err(BenchError::Config("domains must be non-empty with a common positive dimension".into()));
    }
    if counts.is_empty() || counts.iter().any(|&c| c == 0 || c > n) {
        return Err(BenchError::Config(format!("feature counts must lie in 1..={n}")));
    }

    let subsets: Vec<Vec<usize>> = trainable.iter().copied().combinations(k).collect();
    // (per count: errors of evaluated pairs), skips
    let per_subset: Vec<(Vec<Vec<f64>>, Vec<Skip>)> = subsets
        .par_iter()
        .map(|subset| evaluate_subset(domains, subset, selector, counts, classifier, n))
        .collect::<Result<_, BenchError>>()?;

    let mut errors = vec![Vec::new(); counts.len()];
    let mut skips = Vec::new();
    for (errs, sk) in per_subset {
        for (all, e) in errors.iter_mut().zip(errs) {
            all.extend(e);
        }
        skips.extend(sk);
    }
    let rows = counts
        .iter()
        .zip(errors)
        .map(|(&count, e)| XvalRow {
            count,
            mean_balanced_error: (!e.is_empty()).then(|| e.iter().sum::<f64>() / e.len() as f64),
            pairs: e.len(),
            skipped: skips.len(),
        })
        .collect();
    Ok(XvalTable { rows, skips })
}

fn evaluate_subset(
    domains: &[DomainData],
    subset: &[usize],
    selector: Selector,
    counts: &[usize],
    classifier: ClassifierKind,
    n: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Skip>), BenchError> {
    let oracle = Oracle::grant();
    let mut errors = vec![Vec::new(); counts.len()];
    let mut skips = Vec::new();
    let groups: Vec<&[Example]> = subset.iter().map(|&z| domains[z].examples.as_slice()).collect();
    let train: Vec<&Example> = groups.iter().flat_map(|g| g.iter()).collect();
    if !(train.iter().any(|e| e.y()) && train.iter().any(|e| !e.y())) {
        skips.push(Skip { subset: subset.to_vec(), held_out: None, reason: "training split lacks a class".into() });
        return Ok((errors, skips));
    }
    let table = group_correlation_table(&groups, n);
    let pooled = group_pooled_correlations(train.iter().copied(), n);
    let scores = fsus_scores(&table, &pooled, selector.alpha())?;
    let held_out: Vec<usize> = (0..domains.len()).filter(|z| !subset.contains(z)).collect();

    for (ci, &count) in counts.iter().enumerate() {
        let selected = select_top(&scores, count)?;
        let projected: Vec<Example> = train.iter().map(|e| project(e, &selected)).collect();
        let h = classifier.train(&projected)?;
        for &z in &held_out {
            assert!(
                train.iter().all(|e| e.domain(&oracle) != Some(mdlearn::DomainId(z as u64))),
                "held-out domain {z} leaked into training"
            );
            let test = &domains[z].examples;
            if !has_both_classes(test) {
                if ci == 0 {
                    skips.push(Skip {
                        subset: subset.to_vec(),
                        held_out: Some(z),
                        reason: format!("held-out domain {} lacks a class", domains[z].name),
                    });
                }
                continue;
            }
            let test: Vec<Example> = test.iter().map(|e| project(e, &selected)).collect();
            errors[ci].push(class_errors(&h, &test)?.balanced_rate());
        }
    }
    Ok((errors, skips))
}

fn project(e: &Example, features: &[usize]) -> Example {
    Example::new(e.x().project(features), e.y())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdlearn::{BitVec, DomainId};

    fn domain(z: u64, rows: &[(&str, bool)]) -> DomainData {
        DomainData {
            name: format!("u{z}"),
            examples: rows
                .iter()
                .map(|(s, y)| Example::with_domain(BitVec::from_str01(s).unwrap(), *y, DomainId(z)))
                .collect(),
        }
    }

    fn toy() -> Vec<DomainData> {
        vec![
            domain(0, &[("110", true), ("000", false), ("100", true), ("011", false)]),
            domain(1, &[("101", true), ("010", false), ("111", true), ("001", false)]),
            domain(2, &[("100", true), ("001", false), ("110", true), ("000", false)]),
        ]
    }

    #[test]
    fn leave_one_domain_out_counts_pairs() {
        let t = cross_domain_validation(&toy(), 2, &[], Selector::Baseline, &[1, 3], ClassifierKind::Knn(1)).unwrap();
        // three subsets, one held-out domain each
        assert_eq!(t.rows[0].pairs, 3);
        assert_eq!(t.rows[1].pairs, 3);
        // feature 0 is the label in every domain
        assert_eq!(t.rows[0].mean_balanced_error, Some(0.0));
    }

    #[test]
    fn k_one_evaluates_on_all_other_domains() {
        let t = cross_domain_validation(&toy(), 1, &[], Selector::Fsus(2.0), &[1], ClassifierKind::Centroid).unwrap();
        assert_eq!(t.rows[0].pairs, 6);
        assert_eq!(t.rows[0].mean_balanced_error, Some(0.0));
    }

    #[test]
    fn excluded_domains_are_only_evaluated() {
        let t = cross_domain_validation(&toy(), 2, &[2], Selector::Baseline, &[1], ClassifierKind::Knn(1)).unwrap();
        assert_eq!(t.rows[0].pairs, 1);
        assert!(cross_domain_validation(&toy(), 3, &[2], Selector::Baseline, &[1], ClassifierKind::Knn(1)).is_err());
        assert!(cross_domain_validation(&toy(), 3, &[], Selector::Baseline, &[1], ClassifierKind::Knn(1)).is_err());
    }

    #[test]
    fn single_class_domains_are_skipped() {
        let mut d = toy();
        d.push(domain(3, &[("100", true), ("110", true)]));
        let t = cross_domain_validation(&d, 3, &[3], Selector::Baseline, &[2], ClassifierKind::Knn(1)).unwrap();
        assert_eq!(t.rows[0].pairs, 0);
        assert_eq!(t.rows[0].mean_balanced_error, None);
        assert_eq!(t.skips.len(), 1);
    }

    #[test]
    fn alpha_zero_matches_the_baseline() {
        let a = cross_domain_validation(&toy(), 2, &[], Selector::Baseline, &[1, 2], ClassifierKind::Knn(3)).unwrap();
        let b = cross_domain_validation(&toy(), 2, &[], Selector::Fsus(0.0), &[1, 2], ClassifierKind::Knn(3)).unwrap();
        assert_eq!(a, b);
    }
}
