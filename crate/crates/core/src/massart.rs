//! Learning under per-domain label noise by reduction to classification-noise
//! (CN) learning.
//!
//! Each dataset is denoised by a CN learner trained on all but one of its
//! examples; the held-out example is relabeled by that learner, and the pooled
//! relabeled examples (one per dataset) form an approximately noiseless iid
//! sample for a final run of the same learner.

use rand::Rng;
use rayon::prelude::*;

use crate::conjunction::{Conjunction, Literal};
use crate::error::{invalid, Result};
use crate::hypothesis::Hypothesis;
use crate::types::{Example, MultiDomainSample};

/// A learner for a fixed noise rate `η ≤ eta_bound < 1/2`, with its
/// sample-size function standing in for the runtime polynomial.
pub trait CnLearner: Sync {
    fn learn(&self, sample: &[Example], eta_bound: f64, eps: f64, delta: f64) -> Result<Hypothesis>;

    /// Examples sufficient for `(eps, delta)` accuracy at noise `eta_bound`.
    fn sample_size(&self, dim: usize, eta_bound: f64, eps: f64, delta: f64) -> f64;

    fn name(&self) -> &str;
}

fn check_params(eta_bound: f64, eps: f64, delta: f64) -> Result<()> {
    if !(0.0..0.5).contains(&eta_bound) {
        return invalid(format!("eta_bound must lie in [0, 1/2), got {eta_bound}"));
    }
    if !(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta <= 1.0) {
        return invalid(format!("eps and delta must lie in (0, 1], got {eps}, {delta}"));
    }
    Ok(())
}

fn noisy_errors(h: &Hypothesis, sample: &[Example]) -> Result<usize> {
    let mut errors = 0;
    for e in sample {
        if h.predict(e.x())? != e.y() {
            errors += 1;
        }
    }
    Ok(errors)
}

/// Empirical risk minimization over an explicit finite class. Under random
/// classification noise the expected noisy error is `η + (1−2η)·err`, so the
/// ordering of class members is preserved and no noise estimate is needed.
/// Ties go to the lowest class index.
pub fn cn_erm_finite(sample: &[Example], class: &[Hypothesis], _eta_bound: f64) -> Result<Hypothesis> {
    if sample.is_empty() || class.is_empty() {
        return invalid("ERM needs a non-empty sample and class");
    }
    let errors = class
        .par_iter()
        .map(|h| noisy_errors(h, sample))
        .collect::<Result<Vec<_>>>()?;
    let best = errors
        .iter()
        .enumerate()
        .min_by_key(|&(i, e)| (*e, i))
        .map(|(i, _)| i)
        .expect("class is non-empty");
    Ok(class[best].clone())
}

/// All conjunctions over `dim` features with at most `width` literals, in
/// order of size then lexicographic literal order. Index 0 is the empty
/// conjunction.
pub fn conjunctions_up_to(dim: usize, width: usize) -> Vec<Hypothesis> {
    fn extend(dim: usize, width: usize, start: usize, current: &mut Vec<Literal>, out: &mut Vec<Vec<Literal>>) {
        if current.len() == width {
            return;
        }
        for f in start..dim {
            for value in [false, true] {
                current.push(Literal::new(f, value));
                out.push(current.clone());
                extend(dim, width, f + 1, current, out);
                current.pop();
            }
        }
    }
    let mut all = vec![Vec::new()];
    extend(dim, width, 0, &mut Vec::new(), &mut all);
    all.sort_by_key(|lits| lits.len());
    all.into_iter()
        .map(|lits| Hypothesis::Conj(Conjunction::from_literals(dim, lits).expect("distinct features")))
        .collect()
}

/// [`cn_erm_finite`] bound to a class.
pub struct FiniteErm {
    class: Vec<Hypothesis>,
}

impl FiniteErm {
    pub fn new(class: Vec<Hypothesis>) -> Result<Self> {
        if class.is_empty() {
            return invalid("empty hypothesis class");
        }
        Ok(FiniteErm { class })
    }

    pub fn class(&self) -> &[Hypothesis] {
        &self.class
    }
}

impl CnLearner for FiniteErm {
    fn learn(&self, sample: &[Example], eta_bound: f64, _eps: f64, _delta: f64) -> Result<Hypothesis> {
        cn_erm_finite(sample, &self.class, eta_bound)
    }

    /// Hoeffding plus a union bound over the class: `2·ln(2|C|/δ) / (ε(1−2η_b))²`.
    fn sample_size(&self, _dim: usize, eta_bound: f64, eps: f64, delta: f64) -> f64 {
        let gap = eps * (1.0 - 2.0 * eta_bound);
        (2.0 * (2.0 * self.class.len() as f64 / delta).ln() / (gap * gap)).ceil()
    }

    fn name(&self) -> &str {
        "erm"
    }
}

/// Per-literal counts: how many examples violate the literal, and how many of
/// those carry a (noisy) positive label.
struct LiteralStats {
    violated: Vec<u64>,
    violated_pos: Vec<u64>,
}

impl LiteralStats {
    // literal index 2k is x[k]=0, 2k+1 is x[k]=1
    fn collect(sample: &[Example], dim: usize) -> Self {
        let mut ones = vec![0u64; dim];
        let mut ones_pos = vec![0u64; dim];
        let mut pos = 0u64;
        for e in sample {
            for k in e.x().iter_ones() {
                ones[k] += 1;
                if e.y() {
                    ones_pos[k] += 1;
                }
            }
            pos += u64::from(e.y());
        }
        let total = sample.len() as u64;
        let mut violated = Vec::with_capacity(2 * dim);
        let mut violated_pos = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            violated.push(ones[k]);
            violated_pos.push(ones_pos[k]);
            violated.push(total - ones[k]);
            violated_pos.push(pos - ones_pos[k]);
        }
        LiteralStats { violated, violated_pos }
    }

    /// Whether literal `l` passes at noise guess `eta`:
    /// `(W − η̂V)/(M(1−2η̂)) ≤ θ`, rearranged to avoid the division.
    fn keeps(&self, l: usize, eta: f64, threshold_count: f64) -> bool {
        let w = self.violated_pos[l] as f64;
        let v = self.violated[l] as f64;
        w - eta * v <= threshold_count * (1.0 - 2.0 * eta)
    }
}

/// Conjunction learner under random classification noise with an unknown
/// rate `η ≤ eta_bound`.
///
/// For each noise guess `η̂` on the grid `{0, Δ, 2Δ, …, η_b}` with
/// `Δ = (1−2η_b)ε'/8`, keep literal `l` when the noise-corrected estimate of
/// `Pr[x violates l ∧ c(x)=1]` is at most `ε'/(8n)`. Each literal's estimate
/// is monotone in `η̂`, so the grid yields at most `2n+1` distinct candidates;
/// these are located by binary search instead of visiting every grid point.
/// The candidate with the fewest disagreements with the noisy labels wins
/// (ties to the smaller `η̂`); noisy error is an increasing affine function of
/// true error at the sample's single noise rate.
pub fn cn_conjunction(sample: &[Example], eta_bound: f64, eps: f64, delta: f64) -> Result<Hypothesis> {
    check_params(eta_bound, eps, delta)?;
    let Some(first) = sample.first() else {
        return invalid("empty sample");
    };
    let dim = first.dim();
    if sample.iter().any(|e| e.dim() != dim) {
        return invalid("examples have mixed dimensions");
    }
    let stats = LiteralStats::collect(sample, dim);
    let threshold_count = eps / (8.0 * dim.max(1) as f64) * sample.len() as f64;

    let step = (1.0 - 2.0 * eta_bound) * eps / 8.0;
    let last = (eta_bound / step).ceil() as u64;
    let eta_at = |j: u64| (j as f64 * step).min(eta_bound);

    // every index where some literal's membership flips starts a new candidate
    let mut starts = vec![0u64];
    for l in 0..2 * dim {
        let at_zero = stats.keeps(l, eta_at(0), threshold_count);
        if stats.keeps(l, eta_at(last), threshold_count) == at_zero {
            continue;
        }
        let (mut lo, mut hi) = (0u64, last);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if stats.keeps(l, eta_at(mid), threshold_count) == at_zero {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        starts.push(hi);
    }
    starts.sort_unstable();
    starts.dedup();

    let mut best: Option<(usize, Conjunction)> = None;
    for j in starts {
        let eta = eta_at(j);
        let literals = (0..2 * dim)
            .filter(|&l| stats.keeps(l, eta, threshold_count))
            .map(|l| Literal::new(l / 2, l % 2 == 1));
        let candidate = Conjunction::from_literals(dim, literals)?;
        let errors = sample.iter().filter(|e| candidate.is_satisfied(e.x()) != e.y()).count();
        if best.as_ref().is_none_or(|(b, _)| errors < *b) {
            best = Some((errors, candidate));
        }
    }
    Ok(Hypothesis::Conj(best.expect("at least one candidate").1))
}

/// [`cn_conjunction`] as a [`CnLearner`].
pub struct ConjunctionCn;

impl CnLearner for ConjunctionCn {
    fn learn(&self, sample: &[Example], eta_bound: f64, eps: f64, delta: f64) -> Result<Hypothesis> {
        cn_conjunction(sample, eta_bound, eps, delta)
    }

    /// Hoeffding for each of the `4n` literal statistics at accuracy
    /// `ε(1−2η_b)/(16n)`: `ln(8n/δ) / (2·(ε(1−2η_b)/(16n))²)`.
    fn sample_size(&self, dim: usize, eta_bound: f64, eps: f64, delta: f64) -> f64 {
        let n = dim.max(1) as f64;
        let acc = eps * (1.0 - 2.0 * eta_bound) / (16.0 * n);
        ((8.0 * n / delta).ln() / (2.0 * acc * acc)).ceil()
    }

    fn name(&self) -> &str {
        "conjunction"
    }
}

/// Outcome of [`denoise_reduce`], with the bookkeeping needed to audit it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub hypothesis: Hypothesis,
    /// Per dataset, the index of the held-out example.
    pub holdouts: Vec<usize>,
    /// Per dataset, the learner trained on the other `m−1` examples.
    pub inner: Vec<Hypothesis>,
    /// The held-out examples with their labels replaced by `inner[i]`.
    pub relabeled: Vec<Example>,
}

/// Denoise each dataset, relabel one held-out example per dataset, and train
/// on the pooled relabeled sample.
///
/// Inner runs use `ε' = δ' = δ/(4d)` at noise bound `eta_bound`; the final
/// run uses noise bound 0 and `(ε, δ/2)`.
pub fn denoise_reduce<R: Rng + ?Sized>(
    t: &MultiDomainSample,
    cn: &dyn CnLearner,
    eta_bound: f64,
    eps: f64,
    delta: f64,
    rng: &mut R,
) -> Result<Reduction> {
    check_params(eta_bound, eps, delta)?;
    let m = t.per_dataset();
    if m < 2 {
        return invalid(format!("each dataset needs at least 2 examples, got {m}"));
    }
    let d = t.num_datasets();
    let inner_param = delta / (4.0 * d as f64);
    let holdouts: Vec<usize> = (0..d).map(|_| rng.random_range(0..m)).collect();

    let inner = t
        .datasets()
        .par_iter()
        .zip(&holdouts)
        .map(|(ds, &h)| {
            let train: Vec<Example> = ds
                .examples()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != h)
                .map(|(_, e)| e.clone())
                .collect();
            debug_assert_eq!(train.len(), m - 1);
            cn.learn(&train, eta_bound, inner_param, inner_param)
        })
        .collect::<Result<Vec<_>>>()?;

    let relabeled = t
        .datasets()
        .iter()
        .zip(&holdouts)
        .zip(&inner)
        .map(|((ds, &h), hi)| {
            let x = &ds.examples()[h];
            Ok(x.relabeled(hi.predict(x.x())?))
        })
        .collect::<Result<Vec<_>>>()?;

    let hypothesis = cn.learn(&relabeled, 0.0, eps, delta / 2.0)?;
    Ok(Reduction { hypothesis, holdouts, inner, relabeled })
}

/// The sizes the reduction's guarantee asks for: `d = f(1, 1/ε, 2/δ)` and
/// `m > f(1/(1−2η_b), 4d/δ, 4d/δ)`, with `f` the learner's sample size.
/// Kept as floats: for most learners these overflow any integer type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProofSizes {
    pub datasets: f64,
    pub per_dataset: f64,
}

pub fn proof_sizes(cn: &dyn CnLearner, dim: usize, eta_bound: f64, eps: f64, delta: f64) -> Result<ProofSizes> {
    check_params(eta_bound, eps, delta)?;
    let datasets = cn.sample_size(dim, 0.0, eps, delta / 2.0).max(1.0);
    let inner = delta / (4.0 * datasets);
    let per_dataset = cn.sample_size(dim, eta_bound, inner, inner) + 1.0;
    Ok(ProofSizes { datasets, per_dataset })
}
