#![allow(dead_code)]

use mdlearn::{BitVec, Classifier, Conjunction, Literal};

/// Every point of `{0,1}^n`.
pub fn cube(n: usize) -> impl Iterator<Item = BitVec> {
    assert!(n <= 20);
    (0..1u64 << n).map(move |v| BitVec::from_u64(v, n))
}

/// `Pr[a(x) ≠ b(x)]` under the uniform distribution, by enumeration.
pub fn uniform_disagreement<A: Classifier, B: Classifier>(a: &A, b: &B, n: usize) -> f64 {
    let differ = cube(n).filter(|x| a.classify(x).unwrap() != b.classify(x).unwrap()).count();
    differ as f64 / (1u64 << n) as f64
}

/// Conjunction from 1-indexed signed literals, e.g. `&[-1, 3]`.
pub fn conj(n: usize, signed: &[i64]) -> Conjunction {
    Conjunction::from_literals(n, signed.iter().map(|&s| Literal::new(s.unsigned_abs() as usize - 1, s > 0))).unwrap()
}
