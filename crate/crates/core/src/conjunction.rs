//! Conjunctions of literals `x[k] = b` over `{0,1}^n`.

use std::fmt;

use crate::bits::BitVec;
use crate::error::{invalid, Result};

/// The literal `x[feature] = value` (0-indexed feature).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub feature: usize,
    pub value: bool,
}

impl Literal {
    pub fn new(feature: usize, value: bool) -> Self {
        Literal { feature, value }
    }

    pub fn negated(self) -> Self {
        Literal { feature: self.feature, value: !self.value }
    }
}

/// A conjunction over `dim` features.
///
/// Stored as a constrained-feature mask plus required values, so a feature
/// can never carry both polarities. A contradictory literal set is kept as
/// the explicit unsatisfiable conjunction, which is false everywhere.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunction {
    dim: usize,
    satisfiable: bool,
    mask: BitVec,
    values: BitVec,
}

impl Conjunction {
    /// The conjunction with no literals (true everywhere).
    pub fn empty(dim: usize) -> Self {
        Conjunction { dim, satisfiable: true, mask: BitVec::zeros(dim), values: BitVec::zeros(dim) }
    }

    pub fn unsatisfiable(dim: usize) -> Self {
        Conjunction { dim, satisfiable: false, mask: BitVec::zeros(dim), values: BitVec::zeros(dim) }
    }

    /// Builds a conjunction; a feature listed with both polarities yields
    /// the unsatisfiable conjunction.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(dim: usize, literals: I) -> Result<Self> {
        let mut c = Conjunction::empty(dim);
        for lit in literals {
            if lit.feature >= dim {
                return invalid(format!("literal on feature {} outside dimension {dim}", lit.feature));
            }
            if c.mask.get(lit.feature) {
                if c.values.get(lit.feature) != lit.value {
                    return Ok(Conjunction::unsatisfiable(dim));
                }
            } else {
                c.mask.set(lit.feature, true);
                c.values.set(lit.feature, lit.value);
            }
        }
        Ok(c)
    }

    /// The conjunction fixing every coordinate to `x`.
    pub fn point(x: &BitVec) -> Self {
        Conjunction { dim: x.len(), satisfiable: true, mask: BitVec::ones(x.len()), values: x.clone() }
    }

    /// Builds directly from a mask and required values (bits of `values`
    /// outside `mask` are ignored).
    pub fn from_mask(mask: BitVec, values: &BitVec) -> Self {
        assert_eq!(mask.len(), values.len());
        let dim = mask.len();
        let mut v = BitVec::zeros(dim);
        for k in mask.iter_ones() {
            v.set(k, values.get(k));
        }
        Conjunction { dim, satisfiable: true, mask, values: v }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_satisfiable(&self) -> bool {
        self.satisfiable
    }

    /// Number of literals (0 for the unsatisfiable conjunction).
    pub fn len(&self) -> usize {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.satisfiable && self.len() == 0
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.mask.iter_ones().map(move |k| Literal::new(k, self.values.get(k)))
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.satisfiable && self.mask.get(lit.feature) && self.values.get(lit.feature) == lit.value
    }

    /// True if every literal of `other` also appears in `self`.
    pub fn contains_all(&self, other: &Conjunction) -> bool {
        if !other.satisfiable {
            return !self.satisfiable;
        }
        if !self.satisfiable {
            return true;
        }
        other.literals().all(|l| self.contains(l))
    }

    /// Evaluates the conjunction; `x` must have length `dim`.
    #[inline]
    pub fn is_satisfied(&self, x: &BitVec) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.satisfiable
            && x.words()
                .iter()
                .zip(self.values.words())
                .zip(self.mask.words())
                .all(|((xw, vw), mw)| (xw ^ vw) & mw == 0)
    }

    /// Signed 1-indexed literal form, e.g. `-1 +3` for `x[1]=0 ∧ x[3]=1`.
    /// The empty conjunction prints as `true`, the unsatisfiable one as `false`.
    pub fn to_signed_string(&self) -> String {
        if !self.satisfiable {
            return "false".into();
        }
        if self.is_empty() {
            return "true".into();
        }
        self.literals()
            .map(|l| format!("{}{}", if l.value { '+' } else { '-' }, l.feature + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Inverse of [`Conjunction::to_signed_string`].
    pub fn parse_signed(dim: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "true" => return Ok(Conjunction::empty(dim)),
            "false" => return Ok(Conjunction::unsatisfiable(dim)),
            _ => {}
        }
        let mut lits = Vec::new();
        for tok in s.split_whitespace() {
            let (value, rest) = match tok.as_bytes().first() {
                Some(b'+') => (true, &tok[1..]),
                Some(b'-') => (false, &tok[1..]),
                _ => return invalid(format!("literal `{tok}` must start with + or -")),
            };
            let idx: usize = rest
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad feature index in `{tok}`")))?;
            if idx == 0 {
                return invalid("feature indices are 1-based");
            }
            lits.push(Literal::new(idx - 1, value));
        }
        if lits.is_empty() {
            return invalid("empty literal list (use `true` for the empty conjunction)");
        }
        Conjunction::from_literals(dim, lits)
    }
}

impl fmt::Debug for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conjunction[{}; {}]", self.dim, self)
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.satisfiable {
            return f.write_str("⊥");
        }
        if self.is_empty() {
            return f.write_str("⊤");
        }
        let parts: Vec<String> = self
            .literals()
            .map(|l| format!("x[{}]={}", l.feature + 1, u8::from(l.value)))
            .collect();
        f.write_str(&parts.join(" ∧ "))
    }
}
