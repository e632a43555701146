//! Packed bit vectors for points of the Boolean cube `{0,1}^n`.

use std::fmt;

const WORD: usize = 64;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 1 << 16;

/// A fixed-length vector of bits packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-wise equality
/// and hashing agree with logical equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec { len, words: vec![!0; len.div_ceil(WORD)] };
        v.clear_tail();
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVec { len, words }
    }

    /// Parses a string of `0`/`1` characters, e.g. `"001"`.
    pub fn from_str01(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(Self::from_bits(bits))
    }

    /// Builds a vector of length `len` from the low bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    /// Builds from raw words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(WORD), 0);
        let mut v = BitVec { len, words };
        v.clear_tail();
        v
    }

    /// Builds a vector with the given indices set.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn hamming(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// The sub-vector `x[R]` for the ordered index list `R`.
    pub fn project(&self, indices: &[usize]) -> BitVec {
        BitVec::from_bits(indices.iter().map(|&i| self.get(i)))
    }

    /// Bits where `self` and `other` agree.
    pub fn agreement(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len);
        let mut v = BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| !(a ^ b)).collect(),
        };
        v.clear_tail();
        v
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn not(&self) -> BitVec {
        let mut v = BitVec { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip_across_words() {
        let mut v = BitVec::zeros(130);
        for i in [0, 63, 64, 127, 129] {
            v.set(i, true);
        }
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 127, 129]);
        assert_eq!(v.count_ones(), 5);
        v.set(64, false);
        assert!(!v.get(64));
    }

    #[test]
    fn ones_and_not_keep_tail_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.count_ones(), 70);
        assert_eq!(v.not(), BitVec::zeros(70));
        assert_eq!(BitVec::zeros(70).not(), v);
    }

    #[test]
    fn from_str01_and_display() {
        let v = BitVec::from_str01("0011").unwrap();
        assert_eq!(v.to_string(), "0011");
        assert!(BitVec::from_str01("01x").is_none());
    }

    #[test]
    fn hamming_and_project() {
        let a = BitVec::from_str01("10110").unwrap();
        let b = BitVec::from_str01("00111").unwrap();
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.project(&[4, 0, 2]).to_string(), "011");
    }

    #[test]
    fn supports_max_dimension() {
        let mut v = BitVec::zeros(MAX_DIM);
        v.set(MAX_DIM - 1, true);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![MAX_DIM - 1]);
    }
}
