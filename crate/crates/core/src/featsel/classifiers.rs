//! Instance-based downstream classifiers: Hamming k-nearest-neighbor and
//! nearest centroid.

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::hypothesis::Hypothesis;
use crate::types::Example;

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceModel {
    Knn { k: usize, dim: usize, stored: Vec<(BitVec, bool)> },
    /// `means[0]` is the class-0 centroid, `means[1]` the class-1 centroid.
    Centroid { dim: usize, means: [Vec<f64>; 2], sq_norms: [f64; 2] },
}

impl InstanceModel {
    pub fn dim(&self) -> usize {
        match self {
            InstanceModel::Knn { dim, .. } | InstanceModel::Centroid { dim, .. } => *dim,
        }
    }

    pub fn predict(&self, x: &BitVec) -> bool {
        match self {
            InstanceModel::Knn { k, stored, .. } => {
                let mut dist: Vec<(usize, usize)> =
                    stored.iter().enumerate().map(|(i, (s, _))| (s.hamming(x), i)).collect();
                let k = (*k).min(dist.len());
                if k < dist.len() {
                    dist.select_nth_unstable(k - 1);
                }
                let votes = dist[..k].iter().filter(|&&(_, i)| stored[i].1).count();
                2 * votes > k
            }
            InstanceModel::Centroid { means, sq_norms, .. } => {
                // |x - μ|² = |μ|² - 2 x·μ + |x|²; the |x|² term is shared.
                let dot = |mu: &[f64]| x.iter_ones().map(|k| mu[k]).sum::<f64>();
                let d0 = sq_norms[0] - 2.0 * dot(&means[0]);
                let d1 = sq_norms[1] - 2.0 * dot(&means[1]);
                d1 < d0
            }
        }
    }

    pub fn summary(&self) -> String {
        match self {
            InstanceModel::Knn { k, stored, .. } => format!("knn(k={k}, n={})", stored.len()),
            InstanceModel::Centroid { dim, .. } => format!("centroid(dim={dim})"),
        }
    }
}

fn check_dims(sample: &[Example]) -> Result<usize> {
    let Some(first) = sample.first() else {
        return invalid("cannot train on an empty sample");
    };
    let n = first.dim();
    if sample.iter().any(|e| e.dim() != n) {
        return invalid("training examples have mixed dimensions");
    }
    Ok(n)
}

/// Majority vote of the `k` Hamming-nearest stored examples; distance ties
/// go to the earlier example.
pub fn knn_train(sample: &[Example], k: usize) -> Result<Hypothesis> {
    let dim = check_dims(sample)?;
    if k.is_multiple_of(2) {
        return invalid(format!("kNN needs an odd k, got {k}"));
    }
    if k > sample.len() {
        return invalid(format!("kNN with k={k} on only {} examples", sample.len()));
    }
    let stored = sample.iter().map(|e| (e.x().clone(), e.y())).collect();
    Ok(Hypothesis::InstanceBased(InstanceModel::Knn { k, dim, stored }))
}

/// Nearest class mean in Euclidean distance, ties to class 0.
pub fn centroid_train(sample: &[Example]) -> Result<Hypothesis> {
    let dim = check_dims(sample)?;
    let mut sums = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0usize; 2];
    for e in sample {
        let c = usize::from(e.y());
        counts[c] += 1;
        for k in e.x().iter_ones() {
            sums[c][k] += 1.0;
        }
    }
    if counts.contains(&0) {
        return invalid("nearest centroid needs both classes in the training sample");
    }
    for (s, n) in sums.iter_mut().zip(counts) {
        s.iter_mut().for_each(|v| *v /= n as f64);
    }
    let sq_norms = [sums[0].iter().map(|v| v * v).sum(), sums[1].iter().map(|v| v * v).sum()];
    Ok(Hypothesis::InstanceBased(InstanceModel::Centroid { dim, means: sums, sq_norms }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str, y: bool) -> Example {
        Example::new(BitVec::from_str01(s).unwrap(), y)
    }

    fn bv(s: &str) -> BitVec {
        BitVec::from_str01(s).unwrap()
    }

    #[test]
    fn one_nn_recalls_stored_label() {
        let sample = vec![ex("0000", false), ex("1111", true), ex("1100", false)];
        let h = knn_train(&sample, 1).unwrap();
        for e in &sample {
            assert_eq!(h.predict(e.x()).unwrap(), e.y());
        }
    }

    #[test]
    fn three_nn_majority() {
        // nearest three to 0000: two positives at distance 1, one negative at distance 2
        let sample = vec![ex("1000", true), ex("0100", true), ex("1100", false), ex("1111", false), ex("0111", false)];
        let h = knn_train(&sample, 3).unwrap();
        assert!(h.predict(&bv("0000")).unwrap());
    }

    #[test]
    fn distance_ties_prefer_earlier_examples() {
        // all at distance 1 from 000; the first example decides with k=1
        let sample = vec![ex("100", true), ex("010", false), ex("001", false)];
        assert!(knn_train(&sample, 1).unwrap().predict(&bv("000")).unwrap());
    }

    #[test]
    fn knn_preconditions() {
        assert!(knn_train(&[ex("0", true)], 2).is_err());
        assert!(knn_train(&[ex("0", true)], 3).is_err());
        assert!(knn_train(&[], 1).is_err());
    }

    #[test]
    fn centroid_examples() {
        let h = centroid_train(&[ex("00", false), ex("11", true)]).unwrap();
        assert!(h.predict(&bv("11")).unwrap());
        assert!(!h.predict(&bv("00")).unwrap());
        // equidistant
        assert!(!h.predict(&bv("10")).unwrap());
        assert!(centroid_train(&[ex("00", false)]).is_err());
    }
}
