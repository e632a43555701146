//! Seeded generators for the three assumption families.
//!
//! A [`Generator`] wraps a validated [`GeneratorSpec`]. Training samples
//! draw one domain per dataset and then `m` examples from it; test streams
//! draw a fresh domain for every example. All randomness comes from
//! [`rng`] streams keyed by the spec seed and a trial index, so sampling is
//! a pure function of `(spec, trial, sizes)`.

pub mod config;
mod dt;
mod fs;
mod mdm;
pub mod rng;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::types::{Dataset, DomainId, Example, MultiDomainSample};

pub use dt::{random_dtspec, DtSpec};
pub use fs::{xor_flip_probability, FsClauses, FsProfile, FsSpec};
pub use mdm::MdmSpec;
pub use rng::{derive_seed, Purpose};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Mdm(MdmSpec),
    Dt(DtSpec),
    Fs(FsSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub family: Family,
}

impl GeneratorSpec {
    pub fn dim(&self) -> usize {
        match &self.family {
            Family::Mdm(s) => s.dim(),
            Family::Dt(s) => s.dim(),
            Family::Fs(s) => s.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::Mdm(s) => s.validate(),
            Family::Dt(s) => s.validate(),
            Family::Fs(s) => s.validate(),
        }
    }

    fn domain_weights(&self) -> &[f64] {
        match &self.family {
            Family::Mdm(s) => &s.weights,
            Family::Dt(s) => &s.leaf_probs,
            Family::Fs(s) => &s.weights,
        }
    }
}

/// Which label a test stream carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    /// Noiseless ground truth `c(x)`.
    True,
    /// Labels as the training data sees them (noisy under Massart data).
    Observed,
}

pub(crate) fn uniform_weights(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

pub(crate) fn check_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return invalid("at least one domain is required");
    }
    if w.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return invalid("domain weights must be finite and non-negative");
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return invalid(format!("domain weights sum to {total}, not 1"));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Generator {
    spec: GeneratorSpec,
    domains: WeightedIndex<f64>,
    flips: Vec<Vec<f64>>,
}

impl Generator {
    pub fn new(spec: GeneratorSpec) -> Result<Self> {
        spec.validate()?;
        let domains = WeightedIndex::new(spec.domain_weights().iter().copied())
            .map_err(|e| crate::Error::InvalidInput(format!("domain weights: {e}")))?;
        let flips = match &spec.family {
            Family::Fs(fs) => fs.flip_table(),
            _ => Vec::new(),
        };
        Ok(Generator { spec, domains, flips })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn num_domains(&self) -> usize {
        self.spec.domain_weights().len()
    }

    /// One example from domain `z`: `(x, true label, observed label)`.
    fn draw<R: Rng>(&self, z: usize, rng: &mut R) -> (crate::bits::BitVec, bool, bool) {
        match &self.spec.family {
            Family::Mdm(s) => s.draw(z, rng),
            Family::Dt(s) => s.draw(z, rng),
            Family::Fs(s) => s.draw(z, &self.flips, rng),
        }
    }

    /// `m` examples from the fixed domain `z`, with observed labels.
    pub fn sample_domain<R: Rng>(&self, z: usize, m: usize, rng: &mut R) -> Result<Dataset> {
        if z >= self.num_domains() {
            return invalid(format!("domain {z} out of range"));
        }
        let examples = (0..m)
            .map(|_| {
                let (x, _, y) = self.draw(z, rng);
                Example::with_domain(x, y, DomainId(z as u64))
            })
            .collect();
        Dataset::new(examples)
    }

    /// `d` datasets of `m` examples, each from its own randomly drawn domain.
    pub fn sample_training(&self, d: usize, m: usize, trial: u64) -> Result<MultiDomainSample> {
        if d == 0 || m == 0 {
            return invalid("training samples need d ≥ 1 and m ≥ 1");
        }
        let mut rng = rng::trial_stream(self.spec.seed, trial, Purpose::Training);
        let datasets = (0..d)
            .map(|_| {
                let z = self.domains.sample(&mut rng);
                self.sample_domain(z, m, &mut rng)
            })
            .collect::<Result<_>>()?;
        MultiDomainSample::new(datasets)
    }

    /// `count` iid examples, each from a freshly drawn domain.
    pub fn sample_test(&self, count: usize, trial: u64, labels: LabelMode) -> Result<Vec<Example>> {
        if count == 0 {
            return invalid("test streams need at least one example");
        }
        let mut rng = rng::trial_stream(self.spec.seed, trial, Purpose::Test);
        Ok((0..count)
            .map(|_| {
                let z = self.domains.sample(&mut rng);
                let (x, truth, observed) = self.draw(z, &mut rng);
                let y = match labels {
                    LabelMode::True => truth,
                    LabelMode::Observed => observed,
                };
                Example::with_domain(x, y, DomainId(z as u64))
            })
            .collect())
    }
}

/// Training sample for trial 0 of `spec`.
pub fn sample_training(spec: &GeneratorSpec, d: usize, m: usize) -> Result<MultiDomainSample> {
    Generator::new(spec.clone())?.sample_training(d, m, 0)
}

/// Test stream for trial 0 of `spec`.
pub fn sample_test(spec: &GeneratorSpec, count: usize, labels: LabelMode) -> Result<Vec<Example>> {
    Generator::new(spec.clone())?.sample_test(count, 0, labels)
}
