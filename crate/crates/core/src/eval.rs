//! Error measurement and the first-example baseline.
//!
//! Counts are kept as exact integers; floating point appears only when a
//! rate is reported.

use crate::error::{invalid, Result};
use crate::hypothesis::{Classifier, Hypothesis};
use crate::types::{Example, MultiDomainSample};

/// `errors / total` as exact counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorCount {
    pub errors: u64,
    pub total: u64,
}

impl ErrorCount {
    pub fn rate(&self) -> f64 {
        self.errors as f64 / self.total as f64
    }
}

/// Per-class error counts; the balanced rate is their mean.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassErrors {
    pub negatives: ErrorCount,
    pub positives: ErrorCount,
}

impl ClassErrors {
    /// False positives are errors on true-negative examples.
    pub fn false_positives(&self) -> u64 {
        self.negatives.errors
    }

    pub fn false_negatives(&self) -> u64 {
        self.positives.errors
    }

    pub fn overall(&self) -> ErrorCount {
        ErrorCount {
            errors: self.negatives.errors + self.positives.errors,
            total: self.negatives.total + self.positives.total,
        }
    }

    /// `(e0/n0 + e1/n1) / 2`, evaluated as one rounded division.
    pub fn balanced_rate(&self) -> f64 {
        let (e0, n0) = (self.negatives.errors as u128, self.negatives.total as u128);
        let (e1, n1) = (self.positives.errors as u128, self.positives.total as u128);
        (e0 * n1 + e1 * n0) as f64 / (2 * n0 * n1) as f64
    }
}

pub fn class_errors<'a, C, I>(h: &C, eval: I) -> Result<ClassErrors>
where
    C: Classifier + ?Sized,
    I: IntoIterator<Item = &'a Example>,
{
    let mut out = ClassErrors::default();
    for e in eval {
        let wrong = h.classify(e.x())? != e.y();
        let bucket = if e.y() { &mut out.positives } else { &mut out.negatives };
        bucket.total += 1;
        bucket.errors += u64::from(wrong);
    }
    Ok(out)
}

/// Fraction of examples where the prediction differs from the label.
pub fn error_rate<'a, C, I>(h: &C, eval: I) -> Result<f64>
where
    C: Classifier + ?Sized,
    I: IntoIterator<Item = &'a Example>,
{
    let counts = class_errors(h, eval)?.overall();
    if counts.total == 0 {
        return invalid("error rate of an empty stream");
    }
    Ok(counts.rate())
}

/// Mean of the per-class error rates.
pub fn balanced_error_rate<'a, C, I>(h: &C, eval: I) -> Result<f64>
where
    C: Classifier + ?Sized,
    I: IntoIterator<Item = &'a Example>,
{
    let counts = class_errors(h, eval)?;
    if counts.negatives.total == 0 {
        return invalid("balanced error rate: class 0 is absent from the stream");
    }
    if counts.positives.total == 0 {
        return invalid("balanced error rate: class 1 is absent from the stream");
    }
    Ok(counts.balanced_rate())
}

/// A learner for the noiseless iid setting.
pub trait PacLearner: Sync {
    fn learn(&self, sample: &[Example]) -> Result<Hypothesis>;
}

impl<F> PacLearner for F
where
    F: Fn(&[Example]) -> Result<Hypothesis> + Sync,
{
    fn learn(&self, sample: &[Example]) -> Result<Hypothesis> {
        self(sample)
    }
}

/// Runs `inner` on the first example of every dataset. Those examples are
/// iid draws from the meta-distribution, so any PAC guarantee of `inner`
/// carries over.
pub fn first_example_baseline<L: PacLearner + ?Sized>(t: &MultiDomainSample, inner: &L) -> Result<Hypothesis> {
    let pool: Vec<Example> = t.datasets().iter().map(|d| d.examples()[0].clone()).collect();
    inner.learn(&pool)
}
