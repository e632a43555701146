//! Multi-domain Massart data: a fixed target conjunction whose labels are
//! flipped with a per-domain rate `η(z) ≤ η_b < 1/2`.

use rand::Rng;

use crate::bits::BitVec;
use crate::conjunction::Conjunction;
use crate::error::{invalid, Result};

use super::{check_weights, uniform_weights};

#[derive(Clone, Debug, PartialEq)]
pub struct MdmSpec {
    pub target: Conjunction,
    /// `η(z)` for each domain.
    pub noise_rates: Vec<f64>,
    /// Bound `η_b` known to the learner.
    pub eta_bound: f64,
    pub weights: Vec<f64>,
    /// `Pr[x[k] = 1]`, independent across coordinates and domains.
    pub marginals: Vec<f64>,
}

impl MdmSpec {
    /// `domains` equally likely domains whose rates are drawn uniformly from
    /// `[0, η_b]`.
    pub fn uniform_noise<R: Rng>(
        target: Conjunction,
        marginals: Vec<f64>,
        domains: usize,
        eta_bound: f64,
        rng: &mut R,
    ) -> Self {
        let noise_rates = (0..domains).map(|_| rng.random::<f64>() * eta_bound).collect();
        MdmSpec { target, noise_rates, eta_bound, weights: uniform_weights(domains), marginals }
    }

    /// Same rate in every domain.
    pub fn constant_noise(target: Conjunction, marginals: Vec<f64>, domains: usize, eta: f64) -> Self {
        MdmSpec {
            target,
            noise_rates: vec![eta; domains],
            eta_bound: eta,
            weights: uniform_weights(domains),
            marginals,
        }
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.target.dim() != self.dim() {
            return invalid("target dimension differs from the marginal vector length");
        }
        if !(0.0..0.5).contains(&self.eta_bound) {
            return invalid(format!("η_b must lie in [0, 1/2), got {}", self.eta_bound));
        }
        if self.noise_rates.len() != self.weights.len() {
            return invalid("noise_rates and weights must have one entry per domain");
        }
        if let Some(eta) = self.noise_rates.iter().find(|&&e| !(0.0..=self.eta_bound).contains(&e)) {
            return invalid(format!("domain noise rate {eta} outside [0, η_b={}]", self.eta_bound));
        }
        if self.marginals.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return invalid("feature marginals must lie in [0, 1]");
        }
        check_weights(&self.weights)
    }

    /// Returns `(x, true label, observed label)`.
    pub(super) fn draw<R: Rng>(&self, z: usize, rng: &mut R) -> (BitVec, bool, bool) {
        let x = BitVec::from_bits(self.marginals.iter().map(|&p| rng.random_bool(p)));
        let truth = self.target.is_satisfied(&x);
        let flip = rng.random_bool(self.noise_rates[z]);
        (x, truth, truth ^ flip)
    }

    /// Weighted average noise rate, `Pr[y ≠ c(x)]` ignoring domains.
    pub fn marginal_noise(&self) -> f64 {
        self.weights.iter().zip(&self.noise_rates).map(|(w, e)| w * e).sum()
    }
}
