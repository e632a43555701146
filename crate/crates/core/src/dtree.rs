//! Learning decision trees when every dataset comes from a single leaf.
//!
//! A tree is the union of its positive leaves' path conjunctions. Each
//! positive dataset is a noiseless sample from one such leaf, so its
//! largest consistent conjunction is a conservative estimate of that leaf:
//! it contains every path literal and never fires on a negative point.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bits::BitVec;
use crate::conjunction::Conjunction;
use crate::error::{invalid, Error, Result};
use crate::eval::PacLearner;
use crate::hypothesis::Hypothesis;
use crate::types::{Example, MultiDomainSample};

/// Conjunction of every literal satisfied by all `positives`, i.e. the
/// literals on coordinates where all inputs agree.
pub fn largest_consistent_conjunction(positives: &[BitVec]) -> Result<Conjunction> {
    let Some(first) = positives.first() else {
        return invalid("largest consistent conjunction of an empty set");
    };
    let mut agree = BitVec::ones(first.len());
    for x in &positives[1..] {
        if x.len() != first.len() {
            return invalid(format!("mixed dimensions {} and {}", first.len(), x.len()));
        }
        agree.and_assign(&x.agreement(first));
    }
    Ok(Conjunction::from_mask(agree, first))
}

/// The classic positive-only conjunction learner on a labeled sample.
/// With no positives every literal is kept, which is the unsatisfiable
/// conjunction.
#[derive(Clone, Copy, Debug, Default)]
pub struct LargestConsistent;

impl PacLearner for LargestConsistent {
    fn learn(&self, sample: &[Example]) -> Result<Hypothesis> {
        let Some(first) = sample.first() else {
            return invalid("empty sample");
        };
        let positives: Vec<BitVec> = sample.iter().filter(|e| e.y()).map(|e| e.x().clone()).collect();
        if positives.is_empty() {
            return Ok(Hypothesis::Conj(Conjunction::unsatisfiable(first.dim())));
        }
        Ok(Hypothesis::Conj(largest_consistent_conjunction(&positives)?))
    }
}

/// Union of the largest consistent conjunctions of the positive datasets.
///
/// A dataset is positive when its first label is 1. Every dataset must be
/// label-pure; a mixed dataset means the data is not single-leaf tree data
/// and is reported as an assumption violation.
pub fn learn_dt_multidataset(t: &MultiDomainSample) -> Result<Hypothesis> {
    let per_dataset: Vec<Option<Conjunction>> = t
        .datasets()
        .par_iter()
        .enumerate()
        .map(|(i, ds)| {
            let ex = ds.examples();
            let y = ex[0].y();
            if let Some(j) = ex.iter().position(|e| e.y() != y) {
                return Err(Error::AssumptionViolation(format!(
                    "dataset {i} mixes labels (example {j} differs from the first)"
                )));
            }
            if !y {
                return Ok(None);
            }
            let xs: Vec<BitVec> = ex.iter().map(|e| e.x().clone()).collect();
            largest_consistent_conjunction(&xs).map(Some)
        })
        .collect::<Result<_>>()?;

    let mut seen = HashSet::new();
    let terms = per_dataset
        .into_iter()
        .flatten()
        .filter(|c| seen.insert(c.clone()))
        .collect();
    Ok(Hypothesis::UnionOfConj { dim: t.dim(), terms })
}

/// Expected-error bound `s/d + 2n/m` for the multi-dataset tree learner,
/// computed as a single rounded division.
///
/// Markov's inequality turns it into a high-probability statement: error
/// at most `bound/δ` with probability at least `1-δ`.
pub fn dt_error_bound(s: u64, n: u64, d: u64, m: u64) -> f64 {
    assert!(s >= 1 && n >= 1 && d >= 1 && m >= 1, "dt_error_bound arguments must be >= 1");
    let num = s as u128 * m as u128 + 2 * n as u128 * d as u128;
    num as f64 / (d as u128 * m as u128) as f64
}

/// The sharper per-leaf form `Σ p(1-p)^d + p·2n/(m+1)` over positive leaves.
pub fn dt_leafwise_bound(positive_leaf_probs: &[f64], n: u64, d: u64, m: u64) -> f64 {
    positive_leaf_probs
        .iter()
        .map(|&p| p * (1.0 - p).powi(d as i32) + p * 2.0 * n as f64 / (m as f64 + 1.0))
        .sum()
}

/// Writes a union of conjunctions in the signed-literal text format:
///
/// ```text
/// dim 3
/// -1 +3
/// +2
/// ```
///
/// `dim <n>` comes first, then one conjunction per line as 1-indexed signed
/// literals (`+k` for `x[k]=1`, `-k` for `x[k]=0`). `true` is the empty
/// conjunction and `false` the unsatisfiable one. Blank lines and lines
/// starting with `#` are ignored. No conjunction lines means constant 0.
pub fn write_union(dim: usize, terms: &[Conjunction]) -> String {
    let mut out = format!("dim {dim}\n");
    for c in terms {
        let _ = writeln!(out, "{}", c.to_signed_string());
    }
    out
}

pub fn parse_union(text: &str) -> Result<Hypothesis> {
    let mut dim = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: i + 1, message };
        match dim {
            None => {
                let n = line
                    .strip_prefix("dim ")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| parse_err("expected `dim <n>` header".into()))?;
                dim = Some(n);
            }
            Some(n) => {
                let c = Conjunction::parse_signed(n, line).map_err(|e| parse_err(e.to_string()))?;
                terms.push(c);
            }
        }
    }
    let dim = dim.ok_or(Error::Parse { line: 0, message: "missing `dim <n>` header".into() })?;
    Ok(Hypothesis::UnionOfConj { dim, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjunction::Literal;
    use crate::types::Dataset;

    fn bv(s: &str) -> BitVec {
        BitVec::from_str01(s).unwrap()
    }

    fn footnote() -> Conjunction {
        Conjunction::from_literals(3, [Literal::new(0, false), Literal::new(2, true)]).unwrap()
    }

    fn dataset(points: &[&str], y: bool) -> Dataset {
        Dataset::new(points.iter().map(|p| Example::new(bv(p), y)).collect()).unwrap()
    }

    #[test]
    fn lcc_footnote_example() {
        let c = largest_consistent_conjunction(&[bv("001"), bv("011")]).unwrap();
        assert_eq!(c, footnote());
    }

    #[test]
    fn lcc_single_and_covering_inputs() {
        let x = bv("10110");
        assert_eq!(largest_consistent_conjunction(std::slice::from_ref(&x)).unwrap(), Conjunction::point(&x));
        let c = largest_consistent_conjunction(&[bv("010"), bv("101")]).unwrap();
        assert!(c.is_empty());
        assert!(largest_consistent_conjunction(&[]).is_err());
        assert!(largest_consistent_conjunction(&[bv("01"), bv("011")]).is_err());
    }

    #[test]
    fn learner_without_positives_predicts_zero() {
        let h = LargestConsistent.learn(&[Example::new(bv("000"), false)]).unwrap();
        for v in 0..8 {
            assert!(!h.predict(&BitVec::from_u64(v, 3)).unwrap());
        }
    }

    #[test]
    fn all_negative_datasets_give_constant_zero() {
        let t = MultiDomainSample::new(vec![dataset(&["00", "01"], false), dataset(&["11", "10"], false)]).unwrap();
        let h = learn_dt_multidataset(&t).unwrap();
        assert_eq!(h, Hypothesis::UnionOfConj { dim: 2, terms: vec![] });
    }

    #[test]
    fn footnote_dataset() {
        let t = MultiDomainSample::new(vec![dataset(&["001", "011"], true), dataset(&["100", "110"], false)]).unwrap();
        let h = learn_dt_multidataset(&t).unwrap();
        assert_eq!(h, Hypothesis::UnionOfConj { dim: 3, terms: vec![footnote()] });
    }

    #[test]
    fn duplicates_are_collapsed() {
        let t = MultiDomainSample::new(vec![dataset(&["001", "011"], true), dataset(&["011", "001"], true)]).unwrap();
        let Hypothesis::UnionOfConj { terms, .. } = learn_dt_multidataset(&t).unwrap() else { panic!() };
        assert_eq!(terms.len(), 1);
    }

    #[test]
    fn mixed_labels_are_an_assumption_violation() {
        let mixed = Dataset::new(vec![Example::new(bv("01"), true), Example::new(bv("00"), false)]).unwrap();
        let t = MultiDomainSample::new(vec![mixed]).unwrap();
        assert!(matches!(learn_dt_multidataset(&t), Err(Error::AssumptionViolation(_))));
    }

    #[test]
    fn error_bound_values() {
        assert_eq!(dt_error_bound(8, 20, 160, 400), 0.15);
        assert_eq!(dt_error_bound(1, 1, 1, 2), 2.0);
        assert_eq!(dt_error_bound(8, 20, 400, 400), 0.12);
        assert_eq!(dt_error_bound(8, 20, 800, 800), 0.06);
    }

    #[test]
    fn leafwise_bound_is_below_coarse_bound() {
        let probs = [0.3, 0.2, 0.05];
        assert!(dt_leafwise_bound(&probs, 20, 400, 400) < dt_error_bound(3, 20, 400, 400));
    }

    #[test]
    fn union_text_roundtrip_and_errors() {
        let terms = vec![footnote(), Conjunction::empty(3), Conjunction::unsatisfiable(3)];
        let text = write_union(3, &terms);
        assert_eq!(text, "dim 3\n-1 +3\ntrue\nfalse\n");
        assert_eq!(parse_union(&text).unwrap(), Hypothesis::UnionOfConj { dim: 3, terms });
        assert_eq!(parse_union("# c\n\ndim 2\n").unwrap(), Hypothesis::UnionOfConj { dim: 2, terms: vec![] });
        match parse_union("dim 3\n+1\n+9\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_union("+1\n").is_err());
    }
}
