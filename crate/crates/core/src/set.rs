//! Ground sets `[n] = {1, ..., n}` and their subsets.
//!
//! Element `k` is stored as bit `k - 1`, so an [`ElementSet`] is a `u64` mask
//! tagged with its ground size. Wider sets (the pattern sets that live beyond
//! element 64) use sorted element slices and share the dominance test through
//! [`dominates_sorted`].

use std::fmt;

use crate::error::{arg, Result};

/// Largest ground size representable by an [`ElementSet`].
pub const MAX_GROUND: u32 = 64;
/// Largest ground size for which a family may be materialised as a
/// characteristic bit vector over `2^[n]`.
pub const MAX_DENSE: u32 = 24;

/// Size `n` of the ground set `[n]`, `1 <= n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSize(u8);

impl GroundSize {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return arg(format!("ground size must be in 1..=64, got {n}"));
        }
        Ok(GroundSize(n as u8))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Mask with bits `0..n` set.
    #[inline]
    pub fn full_mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn is_dense(self) -> bool {
        self.get() <= MAX_DENSE
    }

    pub(crate) fn require_dense(self, what: &str) -> Result<()> {
        if self.is_dense() {
            Ok(())
        } else {
            Err(crate::Error::Capacity(format!(
                "{what} needs a dense family, which supports n <= {MAX_DENSE} (got n = {})",
                self.0
            )))
        }
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: GroundSize,
    bits: u64,
}

impl ElementSet {
    pub fn empty(n: GroundSize) -> Self {
        ElementSet { n, bits: 0 }
    }

    pub fn full(n: GroundSize) -> Self {
        ElementSet { n, bits: n.full_mask() }
    }

    /// Builds a set from its bitmask (element `k` is bit `k - 1`).
    pub fn from_mask(n: GroundSize, bits: u64) -> Result<Self> {
        if bits & !n.full_mask() != 0 {
            return arg(format!("mask {bits:#x} has elements outside [{n}]"));
        }
        Ok(ElementSet { n, bits })
    }

    pub(crate) fn from_mask_unchecked(n: GroundSize, bits: u64) -> Self {
        debug_assert_eq!(bits & !n.full_mask(), 0);
        ElementSet { n, bits }
    }

    /// Builds a set from 1-based elements in any order; duplicates are rejected.
    pub fn from_elements(n: GroundSize, elements: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n.get() {
                return arg(format!("element {e} is outside [{n}]"));
            }
            let b = 1u64 << (e - 1);
            if bits & b != 0 {
                return arg(format!("element {e} repeated"));
            }
            bits |= b;
        }
        Ok(ElementSet { n, bits })
    }

    /// The interval `[lo, hi]` clipped to `[n]`.
    pub fn interval(n: GroundSize, lo: u32, hi: u32) -> Self {
        let mut bits = 0u64;
        for e in lo.max(1)..=hi.min(n.get()) {
            bits |= 1u64 << (e - 1);
        }
        ElementSet { n, bits }
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.n
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        e >= 1 && e <= self.n.get() && self.bits >> (e - 1) & 1 == 1
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet { n: self.n, bits: self.bits & other.bits }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet { n: self.n, bits: self.bits | other.bits }
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn elements(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `self ≺ other` in the shifting/inclusion order (reflexive).
    pub fn dominates(&self, other: &ElementSet) -> Result<bool> {
        if self.n != other.n {
            return arg(format!(
                "ground sizes differ ({} vs {})",
                self.n, other.n
            ));
        }
        Ok(dominates_mask(self.bits, other.bits))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over the 1-based elements of a mask, increasing.
#[derive(Clone)]
pub struct Elements {
    bits: u64,
}

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.bits == 0 {
            return None;
        }
        let e = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(e + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// Closed form of the shifting/inclusion order on masks: `a ≺ b` iff
/// `|a| >= |b|` and the `i`-th smallest element of `a` is at most the `i`-th
/// smallest element of `b` for every `i <= |b|`.
#[inline]
pub fn dominates_mask(a: u64, b: u64) -> bool {
    if a.count_ones() < b.count_ones() {
        return false;
    }
    // Walk b's elements; after taking i elements of b, a must have at least i
    // elements at or below the current position.
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let lb = b & b.wrapping_neg();
        if a == 0 {
            return false;
        }
        let la = a & a.wrapping_neg();
        if la > lb {
            return false;
        }
        a &= a - 1;
        b &= b - 1;
    }
    true
}

/// [`dominates_mask`] on sorted, duplicate-free element lists of any width.
pub fn dominates_sorted(a: &[u32], b: &[u32]) -> bool {
    a.len() >= b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}
