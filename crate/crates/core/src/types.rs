//! Labeled examples and multi-domain training samples.
//!
//! Generated examples carry the latent domain they were drawn from, but
//! learners never see it: the only accessor requires an [`Oracle`]
//! capability, and no learner entry point takes one.

use crate::bits::BitVec;
use crate::error::{invalid, Result};

/// Opaque identifier of a latent domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainId(pub u64);

/// Capability for reading the hidden domain of generated examples.
///
/// Evaluation code and tests construct one explicitly; learner APIs accept
/// only examples and samples, so they have no way to obtain the domain.
#[derive(Debug)]
pub struct Oracle {
    _private: (),
}

impl Oracle {
    pub fn grant() -> Self {
        Oracle { _private: () }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    x: BitVec,
    y: bool,
    domain: Option<DomainId>,
}

impl Example {
    pub fn new(x: BitVec, y: bool) -> Self {
        Example { x, y, domain: None }
    }

    pub fn with_domain(x: BitVec, y: bool, domain: DomainId) -> Self {
        Example { x, y, domain: Some(domain) }
    }

    #[inline]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn y(&self) -> bool {
        self.y
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn domain(&self, _oracle: &Oracle) -> Option<DomainId> {
        self.domain
    }

    /// Same point with a new label; the hidden domain is kept.
    pub fn relabeled(&self, y: bool) -> Example {
        Example { x: self.x.clone(), y, domain: self.domain }
    }
}

/// Examples drawn from a single latent domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    examples: Vec<Example>,
}

impl Dataset {
    pub fn new(examples: Vec<Example>) -> Result<Self> {
        let Some(first) = examples.first() else {
            return invalid("a dataset needs at least one example");
        };
        let n = first.dim();
        if let Some(bad) = examples.iter().position(|e| e.dim() != n) {
            return invalid(format!(
                "example {bad} has dimension {} but the dataset has dimension {n}",
                examples[bad].dim()
            ));
        }
        let d0 = first.domain;
        if examples.iter().any(|e| e.domain != d0) {
            return invalid("examples of one dataset must share a domain");
        }
        Ok(Dataset { examples })
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.examples[0].dim()
    }

    pub fn domain(&self, oracle: &Oracle) -> Option<DomainId> {
        self.examples[0].domain(oracle)
    }
}

/// `d` datasets of `m` examples each over `{0,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiDomainSample {
    datasets: Vec<Dataset>,
    dim: usize,
}

impl MultiDomainSample {
    pub fn new(datasets: Vec<Dataset>) -> Result<Self> {
        let Some(first) = datasets.first() else {
            return invalid("a sample needs at least one dataset");
        };
        let (n, m) = (first.dim(), first.len());
        for (i, ds) in datasets.iter().enumerate() {
            if ds.dim() != n {
                return invalid(format!("dataset {i} has dimension {} (expected {n})", ds.dim()));
            }
            if ds.len() != m {
                return invalid(format!("dataset {i} has {} examples (expected {m})", ds.len()));
            }
        }
        Ok(MultiDomainSample { datasets, dim: n })
    }

    pub fn datasets(&self) -> &[Dataset] {
        &self.datasets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of datasets `d`.
    pub fn num_datasets(&self) -> usize {
        self.datasets.len()
    }

    /// Examples per dataset `m`.
    pub fn per_dataset(&self) -> usize {
        self.datasets[0].len()
    }

    pub fn examples(&self) -> impl Iterator<Item = &Example> {
        self.datasets.iter().flat_map(|d| d.examples.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str, y: bool) -> Example {
        Example::new(BitVec::from_str01(s).unwrap(), y)
    }

    #[test]
    fn dataset_rejects_empty_and_mixed_dimensions() {
        assert!(Dataset::new(vec![]).is_err());
        assert!(Dataset::new(vec![ex("01", true), ex("011", false)]).is_err());
    }

    #[test]
    fn dataset_rejects_mixed_domains() {
        let a = Example::with_domain(BitVec::zeros(2), true, DomainId(1));
        let b = Example::with_domain(BitVec::zeros(2), true, DomainId(2));
        assert!(Dataset::new(vec![a, b]).is_err());
    }

    #[test]
    fn sample_requires_equal_sizes() {
        let d1 = Dataset::new(vec![ex("01", true)]).unwrap();
        let d2 = Dataset::new(vec![ex("01", true), ex("00", false)]).unwrap();
        assert!(MultiDomainSample::new(vec![d1.clone(), d2]).is_err());
        let s = MultiDomainSample::new(vec![d1.clone(), d1]).unwrap();
        assert_eq!((s.num_datasets(), s.per_dataset(), s.dim()), (2, 1, 2));
    }

    #[test]
    fn domain_visible_only_through_oracle() {
        let e = Example::with_domain(BitVec::zeros(3), false, DomainId(7));
        assert_eq!(e.domain(&Oracle::grant()), Some(DomainId(7)));
        assert_eq!(e.relabeled(true).domain(&Oracle::grant()), Some(DomainId(7)));
    }
}
