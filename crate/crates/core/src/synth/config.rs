//! Human-readable TOML form of [`GeneratorSpec`].
//!
//! ```toml
//! family = "mdm"          # or "dt", "fs"
//! seed = 42               # integer, or a decimal string above i64::MAX
//! dim = 10
//! target = "-1 +3"        # signed 1-indexed literals, `true` for no literals
//! eta_bound = 0.3
//! noise_rates = [0.1, 0.25]
//! weights = [0.5, 0.5]
//! marginals = [0.5, 0.5, ...]
//! ```
//!
//! `dt` files carry `leaf_probs` (pre-order) and a `[[nodes]]` array in
//! pre-order, each `kind = "split"` with 1-indexed `feature` and child node
//! indices `zero`/`one`, or `kind = "leaf"` with `label = 0|1`. `fs` files
//! carry `target`, `beta`, `label_rate`, `weights`, `correlations` (one row
//! per domain, one entry per feature) and the clause constants `strong`,
//! `weak`, `weak_mass`. Floats are written in shortest round-trip form, so
//! a write/read cycle is lossless.

use serde::{Deserialize, Serialize};

use crate::conjunction::Conjunction;
use crate::error::{Error, Result};
use crate::tree::{DecisionTree, Node, Shape};

use super::{DtSpec, Family, FsClauses, FsSpec, GeneratorSpec, MdmSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Seed {
    Int(i64),
    Text(String),
}

impl Seed {
    fn from_u64(v: u64) -> Self {
        i64::try_from(v).map(Seed::Int).unwrap_or_else(|_| Seed::Text(v.to_string()))
    }

    fn to_u64(&self) -> Result<u64> {
        match self {
            Seed::Int(v) => u64::try_from(*v).map_err(|_| Error::InvalidInput(format!("negative seed {v}"))),
            Seed::Text(s) => s.parse().map_err(|_| Error::InvalidInput(format!("bad seed `{s}`"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NodeFile {
    Split { feature: usize, zero: usize, one: usize },
    Leaf { label: u8 },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum SpecFile {
    Mdm {
        seed: Seed,
        dim: usize,
        target: String,
        eta_bound: f64,
        noise_rates: Vec<f64>,
        weights: Vec<f64>,
        marginals: Vec<f64>,
    },
    Dt {
        seed: Seed,
        dim: usize,
        leaf_probs: Vec<f64>,
        nodes: Vec<NodeFile>,
    },
    Fs {
        seed: Seed,
        dim: usize,
        target: String,
        beta: f64,
        label_rate: f64,
        strong: f64,
        weak: f64,
        weak_mass: f64,
        weights: Vec<f64>,
        correlations: Vec<Vec<f64>>,
    },
}

pub fn to_toml(spec: &GeneratorSpec) -> Result<String> {
    let seed = Seed::from_u64(spec.seed);
    let file = match &spec.family {
        Family::Mdm(s) => SpecFile::Mdm {
            seed,
            dim: s.dim(),
            target: s.target.to_signed_string(),
            eta_bound: s.eta_bound,
            noise_rates: s.noise_rates.clone(),
            weights: s.weights.clone(),
            marginals: s.marginals.clone(),
        },
        Family::Dt(s) => SpecFile::Dt {
            seed,
            dim: s.dim(),
            leaf_probs: s.leaf_probs.clone(),
            nodes: s
                .tree
                .nodes()
                .iter()
                .map(|n| match n {
                    Node::Split { feature, zero, one } => {
                        NodeFile::Split { feature: feature + 1, zero: *zero, one: *one }
                    }
                    Node::Leaf { label, .. } => NodeFile::Leaf { label: u8::from(*label) },
                })
                .collect(),
        },
        Family::Fs(s) => SpecFile::Fs {
            seed,
            dim: s.dim(),
            target: s.target.to_signed_string(),
            beta: s.beta,
            label_rate: s.label_rate,
            strong: s.clauses.strong,
            weak: s.clauses.weak,
            weak_mass: s.clauses.weak_mass,
            weights: s.weights.clone(),
            correlations: s.correlations.clone(),
        },
    };
    toml::to_string(&file).map_err(|e| Error::InvalidInput(format!("cannot serialize spec: {e}")))
}

pub fn from_toml(text: &str) -> Result<GeneratorSpec> {
    let file: SpecFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0);
        Error::Parse { line, message: e.message().to_string() }
    })?;
    let spec = match file {
        SpecFile::Mdm { seed, dim, target, eta_bound, noise_rates, weights, marginals } => GeneratorSpec {
            seed: seed.to_u64()?,
            family: Family::Mdm(MdmSpec {
                target: Conjunction::parse_signed(dim, &target)?,
                noise_rates,
                eta_bound,
                weights,
                marginals,
            }),
        },
        SpecFile::Dt { seed, dim, leaf_probs, nodes } => {
            let shape = node_shape(&nodes, 0, 0)?;
            GeneratorSpec {
                seed: seed.to_u64()?,
                family: Family::Dt(DtSpec { tree: DecisionTree::build(dim, &shape)?, leaf_probs }),
            }
        }
        SpecFile::Fs { seed, dim, target, beta, label_rate, strong, weak, weak_mass, weights, correlations } => {
            GeneratorSpec {
                seed: seed.to_u64()?,
                family: Family::Fs(FsSpec {
                    target: Conjunction::parse_signed(dim, &target)?,
                    beta,
                    label_rate,
                    weights,
                    correlations,
                    clauses: FsClauses { strong, weak, weak_mass },
                }),
            }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn node_shape(nodes: &[NodeFile], id: usize, depth: usize) -> Result<Shape> {
    if depth > nodes.len() {
        return Err(Error::InvalidInput("tree nodes contain a cycle".into()));
    }
    match nodes.get(id) {
        None => Err(Error::InvalidInput(format!("node index {id} out of range"))),
        Some(NodeFile::Leaf { label }) => match label {
            0 => Ok(Shape::Leaf(false)),
            1 => Ok(Shape::Leaf(true)),
            other => Err(Error::InvalidInput(format!("leaf label must be 0 or 1, got {other}"))),
        },
        Some(NodeFile::Split { feature, zero, one }) => {
            if *feature == 0 {
                return Err(Error::InvalidInput("split features are 1-indexed".into()));
            }
            Ok(Shape::split(feature - 1, node_shape(nodes, *zero, depth + 1)?, node_shape(nodes, *one, depth + 1)?))
        }
    }
}
