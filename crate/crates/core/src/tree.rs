//! Binary decision trees over `{0,1}^n` whose leaves remember their paths.

use crate::bits::BitVec;
use crate::conjunction::{Conjunction, Literal};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Split { feature: usize, zero: usize, one: usize },
    Leaf { label: bool, path: Conjunction },
}

/// Recursive description of a tree's shape, used to build a [`DecisionTree`].
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Leaf(bool),
    Split { feature: usize, zero: Box<Shape>, one: Box<Shape> },
}

impl Shape {
    pub fn split(feature: usize, zero: Shape, one: Shape) -> Shape {
        Shape::Split { feature, zero: Box::new(zero), one: Box::new(one) }
    }
}

/// Arena-allocated tree; node 0 is the root and leaves are numbered in
/// pre-order.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    dim: usize,
    nodes: Vec<Node>,
    leaves: Vec<usize>,
}

impl DecisionTree {
    pub fn build(dim: usize, shape: &Shape) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut path = Vec::new();
        push_shape(dim, shape, &mut path, &mut nodes)?;
        Self::from_nodes(dim, nodes)
    }

    /// Builds from raw nodes, checking every structural invariant.
    pub fn from_nodes(dim: usize, nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return invalid("a tree needs at least one node");
        }
        let mut seen = vec![false; nodes.len()];
        let mut leaves = Vec::new();
        // (node, path literals)
        let mut stack = vec![(0usize, Vec::<Literal>::new())];
        while let Some((id, path)) = stack.pop() {
            if id >= nodes.len() {
                return invalid(format!("child index {id} out of range"));
            }
            if std::mem::replace(&mut seen[id], true) {
                return invalid(format!("node {id} reachable twice"));
            }
            match &nodes[id] {
                Node::Split { feature, zero, one } => {
                    if *feature >= dim {
                        return invalid(format!("split feature {feature} outside dimension {dim}"));
                    }
                    if path.iter().any(|l| l.feature == *feature) {
                        return invalid(format!("feature {feature} repeats on a root-to-leaf path"));
                    }
                    let mut p1 = path.clone();
                    p1.push(Literal::new(*feature, true));
                    let mut p0 = path;
                    p0.push(Literal::new(*feature, false));
                    // pushed in reverse so leaves come out in pre-order
                    stack.push((*one, p1));
                    stack.push((*zero, p0));
                }
                Node::Leaf { path: stored, .. } => {
                    let expected = Conjunction::from_literals(dim, path)?;
                    if *stored != expected {
                        return invalid(format!("leaf {id} stores {stored} but its path is {expected}"));
                    }
                    leaves.push(id);
                }
            }
        }
        if let Some(orphan) = seen.iter().position(|s| !s) {
            return invalid(format!("node {orphan} is unreachable"));
        }
        Ok(DecisionTree { dim, nodes, leaves })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// `(label, path conjunction)` of leaf `i` in pre-order.
    pub fn leaf(&self, i: usize) -> (bool, &Conjunction) {
        match &self.nodes[self.leaves[i]] {
            Node::Leaf { label, path } => (*label, path),
            Node::Split { .. } => unreachable!("leaf table points at a split"),
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = (bool, &Conjunction)> {
        (0..self.leaves.len()).map(move |i| self.leaf(i))
    }

    pub fn depth(&self) -> usize {
        self.leaves().map(|(_, p)| p.len()).max().unwrap_or(0)
    }

    /// Index of the leaf `x` reaches.
    pub fn leaf_index(&self, x: &BitVec) -> usize {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Split { feature, zero, one } => id = if x.get(*feature) { *one } else { *zero },
                Node::Leaf { .. } => return self.leaves.binary_search(&id).expect("leaf is indexed"),
            }
        }
    }

    pub fn evaluate(&self, x: &BitVec) -> bool {
        self.leaf(self.leaf_index(x)).0
    }

    /// Checks the size bound `leaves ≤ max_leaves`.
    pub fn check_size(&self, max_leaves: usize) -> Result<()> {
        if self.num_leaves() > max_leaves {
            return invalid(format!("tree has {} leaves, more than {max_leaves}", self.num_leaves()));
        }
        Ok(())
    }
}

fn push_shape(dim: usize, shape: &Shape, path: &mut Vec<Literal>, nodes: &mut Vec<Node>) -> Result<usize> {
    let id = nodes.len();
    match shape {
        Shape::Leaf(label) => {
            nodes.push(Node::Leaf { label: *label, path: Conjunction::from_literals(dim, path.iter().copied())? });
        }
        Shape::Split { feature, zero, one } => {
            nodes.push(Node::Split { feature: *feature, zero: 0, one: 0 });
            path.push(Literal::new(*feature, false));
            let z = push_shape(dim, zero, path, nodes)?;
            path.pop();
            path.push(Literal::new(*feature, true));
            let o = push_shape(dim, one, path, nodes)?;
            path.pop();
            nodes[id] = Node::Split { feature: *feature, zero: z, one: o };
        }
    }
    Ok(id)
}
