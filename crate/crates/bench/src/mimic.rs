//! Synthetic stand-in for a multi-site web-page corpus.
//!
//! Several small training domains with few positives and one larger test
//! domain with a balanced label. Features are class-conditional Bernoulli
//! draws whose correlation with the label is set per domain:
//!
//! * robust features share one correlation across every domain;
//! * idiosyncratic features are correlated in a random subset of the
//!   training domains and uncorrelated in the test domain;
//! * the remaining features are uncorrelated everywhere.

use rand::seq::SliceRandom;
use rand::Rng;

use mdlearn::synth::rng;

use crate::config::MimicConfig;
use crate::corpus::{BagOfWordsCorpus, Document};

pub const TEST_DOMAIN: &str = "test";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Robust,
    Idiosyncratic,
    Noise,
}

/// Ground truth of a generated corpus.
#[derive(Clone, Debug)]
pub struct MimicTruth {
    pub roles: Vec<Role>,
    /// `correlations[z][k]`; the last row is the test domain.
    pub correlations: Vec<Vec<f64>>,
}

/// `(Pr[x=1 | y=0], Pr[x=1 | y=1])` for a feature of overall density `dens`
/// and correlation `rho` with a label of mean `pi`, clamped to `[0, 1]`.
pub fn class_conditional(dens: f64, rho: f64, pi: f64) -> (f64, f64) {
    let gap = rho * (dens * (1.0 - dens)).sqrt() / (pi * (1.0 - pi)).sqrt();
    ((dens - pi * gap).clamp(0.0, 1.0), (dens + (1.0 - pi) * gap).clamp(0.0, 1.0))
}

fn uniform<R: Rng>(rng: &mut R, range: [f64; 2]) -> f64 {
    range[0] + rng.random::<f64>() * (range[1] - range[0])
}

pub fn generate(cfg: &MimicConfig, seed: u64) -> (BagOfWordsCorpus, MimicTruth) {
    let mut rng = rng::stream(seed, 0);
    let n = cfg.vocab;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut roles = vec![Role::Noise; n];
    for &k in &order[..cfg.robust] {
        roles[k] = Role::Robust;
    }
    for &k in &order[cfg.robust..cfg.robust + cfg.idiosyncratic] {
        roles[k] = Role::Idiosyncratic;
    }

    let zt = cfg.train_domains;
    let densities: Vec<f64> = (0..n).map(|_| cfg.density * (0.5 + rng.random::<f64>())).collect();
    let mut correlations = vec![vec![0.0; n]; zt + 1];
    for k in 0..n {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        match roles[k] {
            Role::Robust => {
                let r = sign * uniform(&mut rng, cfg.robust_corr);
                correlations.iter_mut().for_each(|row| row[k] = r);
            }
            Role::Idiosyncratic => {
                for row in &mut correlations[..zt] {
                    if rng.random_bool(cfg.idio_rate) {
                        row[k] = sign * uniform(&mut rng, cfg.idio_corr);
                    }
                }
            }
            Role::Noise => {}
        }
    }

    let mut documents = Vec::new();
    for (z, row) in correlations.iter().enumerate() {
        let (name, docs, pi) = if z < zt {
            (format!("d{}", z + 1), rng.random_range(cfg.train_docs_min..=cfg.train_docs_max), cfg.train_positive)
        } else {
            (TEST_DOMAIN.to_string(), cfg.test_docs, cfg.test_positive)
        };
        let probs: Vec<(f64, f64)> = (0..n).map(|k| class_conditional(densities[k], row[k], pi)).collect();
        for _ in 0..docs {
            let label = rng.random_bool(pi);
            let tokens = (0..n)
                .filter(|&k| rng.random_bool(if label { probs[k].1 } else { probs[k].0 }))
                .collect();
            documents.push(Document { domain: name.clone(), label, tokens });
        }
    }

    let vocab = (0..n).map(|k| format!("w{k:04}")).collect();
    let meta = vec![format!(
        "synthetic seed={seed} train_domains={zt} robust={} idiosyncratic={}",
        cfg.robust, cfg.idiosyncratic
    )];
    (BagOfWordsCorpus { vocab, documents, meta }, MimicTruth { roles, correlations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdlearn::featsel::correlation_from_table;

    #[test]
    fn class_conditional_hits_the_correlation() {
        for &(dens, rho, pi) in &[(0.23, 0.3, 0.2), (0.1, -0.2, 0.47), (0.5, 0.0, 0.3)] {
            let (p0, p1) = class_conditional(dens, rho, pi);
            assert!(((1.0 - pi) * p0 + pi * p1 - dens).abs() < 1e-12);
            // cells (x, y)
            let r = correlation_from_table((1.0 - pi) * (1.0 - p0), pi * (1.0 - p1), (1.0 - pi) * p0, pi * p1).unwrap();
            assert!((r - rho).abs() < 1e-12);
        }
    }

    #[test]
    fn corpus_shape() {
        let cfg = crate::config::SuiteConfig::default_for(crate::config::Suite::Fsus);
        let crate::config::SuiteConfig::Fsus(c) = cfg else { unreachable!() };
        let (corpus, truth) = generate(&c.mimic, 3);
        assert_eq!(corpus.domains().len(), c.mimic.train_domains + 1);
        assert_eq!(truth.roles.iter().filter(|r| **r == Role::Robust).count(), c.mimic.robust);
        let stats = corpus.stats();
        let test = stats.iter().find(|s| s.domain == TEST_DOMAIN).unwrap();
        assert_eq!(test.pages, c.mimic.test_docs);
        assert!((test.positive_fraction - c.mimic.test_positive).abs() < 0.05);
        assert!((stats.last().unwrap().density - c.mimic.density).abs() < 0.03);
        for (k, role) in truth.roles.iter().enumerate() {
            if *role != Role::Robust {
                assert_eq!(truth.correlations[c.mimic.train_domains][k], 0.0);
            }
        }
        let (again, _) = generate(&c.mimic, 3);
        assert_eq!(again, corpus);
    }
}
