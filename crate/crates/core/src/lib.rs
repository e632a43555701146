//! Multi-domain learning.
//!
//! Training data arrives as `d` datasets of `m` examples, each dataset drawn
//! from one latent domain of a meta-distribution; the learned classifier is
//! judged on examples from fresh domains. This crate provides:
//!
//! * [`massart`]: a denoising reduction from per-domain label noise to
//!   classification-noise learning, with two noise-tolerant learners;
//! * [`dtree`]: a learner for decision trees when each dataset falls in a
//!   single leaf, plus its expected-error bound;
//! * [`featsel`]: feature selection by cross-domain correlation stability
//!   (FUD and its regularized scoring), and instance-based classifiers;
//! * [`synth`]: seeded generators for each of these settings.

pub mod bits;
pub mod conjunction;
pub mod dtree;
mod error;
pub mod eval;
pub mod featsel;
pub mod hypothesis;
pub mod massart;
pub mod synth;
pub mod tree;
pub mod types;

pub use bits::BitVec;
pub use conjunction::{Conjunction, Literal};
pub use error::{Error, Result};
pub use hypothesis::{Classifier, Hypothesis};
pub use types::{Dataset, DomainId, Example, MultiDomainSample, Oracle};
