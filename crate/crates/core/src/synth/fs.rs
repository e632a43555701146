//! Feature-selection data with a robust feature set and idiosyncratic
//! features.
//!
//! The label is a conjunction of the robust features, which are drawn from
//! a product distribution that ignores the domain. Every other feature is
//! `y XOR Bernoulli(q)` with `q` depending on the domain, so its correlation
//! with the label in each domain hits a configured value exactly.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::BitVec;
use crate::conjunction::{Conjunction, Literal};
use crate::error::{invalid, Result};

use super::{check_weights, uniform_weights};

/// Thresholds of the feature-selection assumption.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FsClauses {
    /// Robust features need `|ρ_k| > strong·β`.
    pub strong: f64,
    /// Other features need `|ρᶻ_k| < weak·β` ...
    pub weak: f64,
    /// ... in domains of total weight above `weak_mass`.
    pub weak_mass: f64,
}

impl Default for FsClauses {
    fn default() -> Self {
        FsClauses { strong: 1.1, weak: 0.9, weak_mass: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FsSpec {
    /// Target over the full feature space; its literals define the robust set.
    pub target: Conjunction,
    pub beta: f64,
    /// `Pr[y = 1]`.
    pub label_rate: f64,
    pub weights: Vec<f64>,
    /// `correlations[z][k]` is `ρᶻ_k` for non-robust `k`; entries of robust
    /// features are ignored (their correlation follows from the target).
    pub correlations: Vec<Vec<f64>>,
    pub clauses: FsClauses,
}

/// Knobs of the default idiosyncratic profile.
#[derive(Clone, Debug, PartialEq)]
pub struct FsProfile {
    pub dim: usize,
    pub robust: usize,
    pub beta: f64,
    pub domains: usize,
    pub label_rate: f64,
    /// Fraction of domains where a non-robust feature is uncorrelated.
    pub null_fraction: f64,
    /// Magnitudes in the remaining domains are uniform in `[strong·β, max_corr]`.
    pub max_corr: f64,
}

impl FsProfile {
    pub fn new(dim: usize, robust: usize, beta: f64, domains: usize) -> Self {
        FsProfile { dim, robust, beta, domains, label_rate: 0.5, null_fraction: 0.3, max_corr: (2.2 * beta).min(0.95) }
    }
}

impl FsSpec {
    /// Random instance of the default profile: each non-robust feature has
    /// a fixed sign, correlation 0 in exactly `round(null_fraction·Z)`
    /// domains and a magnitude of at least `1.1β` elsewhere.
    pub fn idiosyncratic<R: Rng>(profile: &FsProfile, rng: &mut R) -> Result<Self> {
        let FsProfile { dim, robust, beta, domains, .. } = *profile;
        if robust == 0 || robust > dim || domains == 0 {
            return invalid("need 1 ≤ |R*| ≤ n and at least one domain");
        }
        let clauses = FsClauses::default();
        let mut features: Vec<usize> = (0..dim).collect();
        features.shuffle(rng);
        let mut robust_set = features[..robust].to_vec();
        robust_set.sort_unstable();
        let target = Conjunction::from_literals(dim, robust_set.iter().map(|&k| Literal::new(k, rng.random_bool(0.5))))?;

        let lo = clauses.strong * beta;
        let hi = profile.max_corr.max(lo);
        let nulls = (profile.null_fraction * domains as f64).round() as usize;
        let mut correlations = vec![vec![0.0; dim]; domains];
        for k in (0..dim).filter(|k| !robust_set.contains(k)) {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let mut order: Vec<usize> = (0..domains).collect();
            order.shuffle(rng);
            for &z in &order[nulls..] {
                correlations[z][k] = sign * (lo + rng.random::<f64>() * (hi - lo));
            }
        }
        let spec = FsSpec {
            target,
            beta,
            label_rate: profile.label_rate,
            weights: uniform_weights(domains),
            correlations,
            clauses,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// The robust set `R*`, increasing.
    pub fn robust_features(&self) -> Vec<usize> {
        self.target.literals().map(|l| l.feature).collect()
    }

    /// `Pr[x[k] = b_k]` for each robust literal, chosen so the label rate is exact.
    pub fn robust_marginal(&self) -> f64 {
        self.label_rate.powf(1.0 / self.target.len() as f64)
    }

    /// Analytic correlation of robust feature `k` with the label.
    pub fn robust_correlation(&self, k: usize) -> f64 {
        let p = self.robust_marginal();
        let pi = self.label_rate;
        let mag = (pi * (1.0 - p) / (p * (1.0 - pi))).sqrt();
        if self.target.contains(Literal::new(k, true)) {
            mag
        } else {
            -mag
        }
    }

    /// `ρᶻ_k` for any feature.
    pub fn correlation(&self, z: usize, k: usize) -> f64 {
        if self.target.contains(Literal::new(k, true)) || self.target.contains(Literal::new(k, false)) {
            self.robust_correlation(k)
        } else {
            self.correlations[z][k]
        }
    }

    /// Checks the assumption's clauses analytically.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if !self.target.is_satisfiable() || self.target.is_empty() {
            return invalid("target must be a satisfiable conjunction with at least one literal");
        }
        if !(self.beta > 0.0) {
            return invalid("β must be positive");
        }
        if !(self.label_rate > 0.0 && self.label_rate < 1.0) {
            return invalid(format!("label rate must lie in (0,1), got {}", self.label_rate));
        }
        if self.correlations.len() != self.weights.len() {
            return invalid("one correlation row per domain is required");
        }
        if self.correlations.iter().any(|r| r.len() != n) {
            return invalid(format!("correlation rows must have {n} entries"));
        }
        check_weights(&self.weights)?;
        let c = self.clauses;
        for k in self.robust_features() {
            let r = self.robust_correlation(k);
            if r.abs() <= c.strong * self.beta {
                return invalid(format!("robust feature {k} has |ρ| = {r:.4} ≤ {}β", c.strong));
            }
        }
        let robust = self.robust_features();
        for k in (0..n).filter(|k| !robust.contains(k)) {
            let mut weak_mass = 0.0;
            for (z, w) in self.weights.iter().enumerate() {
                let r = self.correlations[z][k];
                if !(-1.0..=1.0).contains(&r) {
                    return invalid(format!("correlation {r} of feature {k} in domain {z} outside [-1,1]"));
                }
                if r.abs() < c.weak * self.beta {
                    weak_mass += w;
                }
            }
            if weak_mass <= c.weak_mass {
                return invalid(format!(
                    "feature {k} is weak in domains of mass {weak_mass:.3}, need more than {}",
                    c.weak_mass
                ));
            }
        }
        Ok(())
    }

    /// Flip probabilities `q[z][k]` realizing each non-robust correlation.
    pub(super) fn flip_table(&self) -> Vec<Vec<f64>> {
        (0..self.weights.len())
            .map(|z| (0..self.dim()).map(|k| xor_flip_probability(self.correlations[z][k], self.label_rate)).collect())
            .collect()
    }

    pub(super) fn draw<R: Rng>(&self, z: usize, flips: &[Vec<f64>], rng: &mut R) -> (BitVec, bool, bool) {
        let n = self.dim();
        let p = self.robust_marginal();
        let mut x = BitVec::zeros(n);
        let mut y = true;
        for lit in self.target.literals() {
            let hit = rng.random_bool(p);
            y &= hit;
            x.set(lit.feature, if hit { lit.value } else { !lit.value });
        }
        for k in 0..n {
            if self.target.contains(Literal::new(k, true)) || self.target.contains(Literal::new(k, false)) {
                continue;
            }
            x.set(k, y ^ rng.random_bool(flips[z][k]));
        }
        (x, y, y)
    }
}

/// `q` such that `x = y XOR Bernoulli(q)` has correlation `rho` with a
/// label of mean `pi`.
///
/// With `u = 1 - 2q` and `a = π - 1/2`, `corr = u·sqrt(π(1-π) / (1/4 - u²a²))`,
/// which inverts to `u = (ρ/2) / sqrt(π(1-π) + ρ²a²)`.
pub fn xor_flip_probability(rho: f64, pi: f64) -> f64 {
    let a = pi - 0.5;
    let u = (rho / 2.0) / (pi * (1.0 - pi) + rho * rho * a * a).sqrt();
    ((1.0 - u) / 2.0).clamp(0.0, 1.0)
}
