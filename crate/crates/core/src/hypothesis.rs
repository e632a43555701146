//! Learned classifiers and their evaluation.

use crate::bits::BitVec;
use crate::conjunction::Conjunction;
use crate::error::{invalid, Result};
use crate::featsel::InstanceModel;

/// Anything that labels points of `{0,1}^n`.
pub trait Classifier: Sync {
    fn classify(&self, x: &BitVec) -> Result<bool>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum Hypothesis {
    ConstantZero,
    ConstantOne,
    Conj(Conjunction),
    /// Predicts 1 iff some term is satisfied; no terms means constant 0.
    UnionOfConj { dim: usize, terms: Vec<Conjunction> },
    /// `inner(x[features])`.
    Masked { input_dim: usize, features: Vec<usize>, inner: Box<Hypothesis> },
    InstanceBased(InstanceModel),
}

impl Hypothesis {
    pub fn masked(input_dim: usize, features: Vec<usize>, inner: Hypothesis) -> Result<Self> {
        if let Some(&bad) = features.iter().find(|&&k| k >= input_dim) {
            return invalid(format!("masked feature {bad} outside dimension {input_dim}"));
        }
        if let Some(d) = inner.expected_dim() {
            if d != features.len() {
                return invalid(format!("inner hypothesis has dimension {d}, mask selects {}", features.len()));
            }
        }
        Ok(Hypothesis::Masked { input_dim, features, inner: Box::new(inner) })
    }

    /// Dimension of accepted inputs; `None` for the constants.
    pub fn expected_dim(&self) -> Option<usize> {
        match self {
            Hypothesis::ConstantZero | Hypothesis::ConstantOne => None,
            Hypothesis::Conj(c) => Some(c.dim()),
            Hypothesis::UnionOfConj { dim, .. } => Some(*dim),
            Hypothesis::Masked { input_dim, .. } => Some(*input_dim),
            Hypothesis::InstanceBased(m) => Some(m.dim()),
        }
    }

    pub fn predict(&self, x: &BitVec) -> Result<bool> {
        if let Some(d) = self.expected_dim() {
            if d != x.len() {
                return invalid(format!("input has dimension {}, hypothesis expects {d}", x.len()));
            }
        }
        Ok(self.predict_unchecked(x))
    }

    fn predict_unchecked(&self, x: &BitVec) -> bool {
        match self {
            Hypothesis::ConstantZero => false,
            Hypothesis::ConstantOne => true,
            Hypothesis::Conj(c) => c.is_satisfied(x),
            Hypothesis::UnionOfConj { terms, .. } => terms.iter().any(|c| c.is_satisfied(x)),
            Hypothesis::Masked { features, inner, .. } => inner.predict_unchecked(&x.project(features)),
            Hypothesis::InstanceBased(m) => m.predict(x),
        }
    }

    /// One-line human-readable summary for reports.
    pub fn summary(&self) -> String {
        match self {
            Hypothesis::ConstantZero => "const0".into(),
            Hypothesis::ConstantOne => "const1".into(),
            Hypothesis::Conj(c) => format!("conj({})", c.to_signed_string()),
            Hypothesis::UnionOfConj { terms, .. } => format!("union[{} terms]", terms.len()),
            Hypothesis::Masked { features, inner, .. } => {
                let r: Vec<String> = features.iter().map(|k| (k + 1).to_string()).collect();
                format!("mask{{{}}}:{}", r.join(","), inner.summary())
            }
            Hypothesis::InstanceBased(m) => m.summary(),
        }
    }
}

impl Classifier for Hypothesis {
    fn classify(&self, x: &BitVec) -> Result<bool> {
        self.predict(x)
    }
}

impl Classifier for crate::tree::DecisionTree {
    fn classify(&self, x: &BitVec) -> Result<bool> {
        if x.len() != self.dim() {
            return invalid(format!("input has dimension {}, tree expects {}", x.len(), self.dim()));
        }
        Ok(self.evaluate(x))
    }
}
