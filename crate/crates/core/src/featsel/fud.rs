//! Feature selection using domains (FUD).
//!
//! Keep the features whose correlation with the label is at least `β` in
//! magnitude in *every* training dataset, then fit a consistent hypothesis
//! on those features alone.

use crate::bits::BitVec;
use crate::conjunction::Conjunction;
use crate::dtree::largest_consistent_conjunction;
use crate::error::{invalid, Error, Result};
use crate::hypothesis::Hypothesis;
use crate::types::MultiDomainSample;

use super::correlation::{correlation_table, CorrelationTable};

/// Hypothesis class searched in the final step.
#[derive(Clone, Debug)]
pub enum HypothesisClass {
    /// All conjunctions over the selected features.
    Conjunctions,
    /// Explicit members over `{0,1}^|R|`, scanned in order. Members with a
    /// different input dimension are skipped.
    Finite(Vec<Hypothesis>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FudOutput {
    /// Selected features, `None` when the class-imbalance shortcut fired.
    pub selected: Option<Vec<usize>>,
    pub hypothesis: Hypothesis,
}

/// Features whose minimum per-dataset `|ρ̂|` is at least `beta`; undefined
/// cells count as zero.
pub fn robust_features(table: &CorrelationTable, beta: f64) -> Vec<usize> {
    (0..table.num_features())
        .filter(|&k| {
            table
                .column(k)
                .map(|c| c.map_or(0.0, f64::abs))
                .fold(f64::INFINITY, f64::min)
                >= beta
        })
        .collect()
}

pub fn fud(t: &MultiDomainSample, class: &HypothesisClass, beta: f64, eps: f64) -> Result<FudOutput> {
    if !(beta > 0.0) {
        return invalid(format!("β must be positive, got {beta}"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("ε must lie in (0,1), got {eps}"));
    }

    let total = (t.num_datasets() * t.per_dataset()) as f64;
    let positives = t.examples().filter(|e| e.y()).count() as f64;
    if positives / total < eps / 2.0 {
        return Ok(FudOutput { selected: None, hypothesis: Hypothesis::ConstantZero });
    }
    if (total - positives) / total < eps / 2.0 {
        return Ok(FudOutput { selected: None, hypothesis: Hypothesis::ConstantOne });
    }

    let selected = robust_features(&correlation_table(t), beta);
    let inner = fit_on_features(t, &selected, class)?;
    let hypothesis = Hypothesis::masked(t.dim(), selected.clone(), inner)?;
    Ok(FudOutput { selected: Some(selected), hypothesis })
}

/// Finds a member of `class` consistent with every `(x[R], y)` in `t`.
pub fn fit_on_features(t: &MultiDomainSample, features: &[usize], class: &HypothesisClass) -> Result<Hypothesis> {
    let projected: Vec<(BitVec, bool)> = t.examples().map(|e| (e.x().project(features), e.y())).collect();
    match class {
        HypothesisClass::Conjunctions => {
            let positives: Vec<BitVec> = projected.iter().filter(|(_, y)| *y).map(|(x, _)| x.clone()).collect();
            let c = if positives.is_empty() {
                Conjunction::unsatisfiable(features.len())
            } else {
                largest_consistent_conjunction(&positives)?
            };
            if let Some((x, _)) = projected.iter().find(|(x, y)| !*y && c.is_satisfied(x)) {
                return Err(Error::Fail(format!(
                    "no conjunction over {} selected features is consistent: negative {x} satisfies {c}",
                    features.len()
                )));
            }
            Ok(Hypothesis::Conj(c))
        }
        HypothesisClass::Finite(members) => {
            for h in members {
                if h.expected_dim().is_some_and(|d| d != features.len()) {
                    continue;
                }
                if projected.iter().all(|(x, y)| h.predict(x).map(|p| p == *y).unwrap_or(false)) {
                    return Ok(h.clone());
                }
            }
            Err(Error::Fail(format!("no class member is consistent on {} selected features", features.len())))
        }
    }
}
