//! Single-leaf tree data: each domain is a leaf of a target tree, and its
//! examples satisfy that leaf's path with the free coordinates uniform.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::tree::{DecisionTree, Shape};

use super::{check_weights, rng, GeneratorSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct DtSpec {
    pub tree: DecisionTree,
    /// Probability of each leaf in pre-order; these are the domain weights.
    pub leaf_probs: Vec<f64>,
}

impl DtSpec {
    pub fn dim(&self) -> usize {
        self.tree.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.leaf_probs.len() != self.tree.num_leaves() {
            return invalid(format!(
                "{} leaf probabilities for {} leaves",
                self.leaf_probs.len(),
                self.tree.num_leaves()
            ));
        }
        check_weights(&self.leaf_probs)
    }

    pub(super) fn draw<R: Rng>(&self, leaf: usize, rng: &mut R) -> (BitVec, bool, bool) {
        let (label, path) = self.tree.leaf(leaf);
        let n = self.dim();
        let mut x = BitVec::from_words(n, (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect());
        for lit in path.literals() {
            x.set(lit.feature, lit.value);
        }
        (x, label, label)
    }

    /// Probabilities of the positive leaves.
    pub fn positive_leaf_probs(&self) -> Vec<f64> {
        self.tree.leaves().zip(&self.leaf_probs).filter(|((y, _), _)| *y).map(|(_, p)| *p).collect()
    }
}

/// Random tree with exactly `s` leaves over `n` features.
///
/// Grows by repeatedly splitting a uniformly chosen leaf (of depth `< n`) on
/// a uniformly chosen feature absent from its path. Leaf labels are fair
/// coins, forced to include both classes when `s ≥ 2`. Leaf probabilities
/// come from a symmetric Dirichlet with concentration `skew`.
pub fn random_dtspec(seed: u64, n: usize, s: usize, skew: f64) -> Result<GeneratorSpec> {
    if n == 0 || s == 0 {
        return invalid("random tree needs n ≥ 1 and s ≥ 1");
    }
    if n < 64 && s > 1usize << n {
        return invalid(format!("{s} leaves are not realizable with {n} features"));
    }
    if !(skew > 0.0) {
        return invalid(format!("Dirichlet concentration must be positive, got {skew}"));
    }
    let mut rng = rng::stream(seed, u64::MAX);

    enum Proto {
        Leaf(Vec<usize>),
        Split(usize, usize, usize),
    }
    let mut nodes = vec![Proto::Leaf(vec![])];
    let mut open = vec![0usize];
    for _ in 1..s {
        let pick = rng.random_range(0..open.len());
        let id = open.swap_remove(pick);
        let Proto::Leaf(path) = std::mem::replace(&mut nodes[id], Proto::Leaf(vec![])) else { unreachable!() };
        let free: Vec<usize> = (0..n).filter(|k| !path.contains(k)).collect();
        let feature = *free.choose(&mut rng).expect("open leaves have free features");
        let mut child_path = path;
        child_path.push(feature);
        let (zero, one) = (nodes.len(), nodes.len() + 1);
        nodes.push(Proto::Leaf(child_path.clone()));
        nodes.push(Proto::Leaf(child_path));
        nodes[id] = Proto::Split(feature, zero, one);
        for c in [zero, one] {
            if let Proto::Leaf(p) = &nodes[c] {
                if p.len() < n {
                    open.push(c);
                }
            }
        }
    }

    let mut labels: Vec<bool> = (0..s).map(|_| rng.random_bool(0.5)).collect();
    if s >= 2 && labels.iter().all(|&l| l == labels[0]) {
        let i = rng.random_range(0..s);
        labels[i] = !labels[i];
    }

    fn to_shape(nodes: &[Proto], id: usize, labels: &mut impl Iterator<Item = bool>) -> Shape {
        match nodes[id] {
            Proto::Leaf(_) => Shape::Leaf(labels.next().expect("one label per leaf")),
            Proto::Split(f, z, o) => {
                let zero = to_shape(nodes, z, labels);
                let one = to_shape(nodes, o, labels);
                Shape::split(f, zero, one)
            }
        }
    }
    let shape = to_shape(&nodes, 0, &mut labels.into_iter());
    let tree = DecisionTree::build(n, &shape)?;

    let gamma = Gamma::new(skew, 1.0).map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
    let mut probs: Vec<f64> = (0..s).map(|_| gamma.sample(&mut rng)).collect();
    let total: f64 = probs.iter().sum();
    if total > 0.0 && total.is_finite() {
        probs.iter_mut().for_each(|p| *p /= total);
    } else {
        // every gamma draw underflowed; the Dirichlet limit is a vertex
        let hot = rng.random_range(0..s);
        probs = (0..s).map(|i| if i == hot { 1.0 } else { 0.0 }).collect();
    }

    let dt = DtSpec { tree, leaf_probs: probs };
    dt.validate()?;
    Ok(GeneratorSpec { seed, family: super::Family::Dt(dt) })
}
