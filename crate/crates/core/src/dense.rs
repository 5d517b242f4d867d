//! Characteristic bit vectors over `2^[n]`.
//!
//! Bit `x` of a [`DenseBits`] is set iff the set with mask `x` is a member.
//! Adding or deleting element `i` moves bit `x` to `x ± 2^(i-1)`, which is a
//! masked shift inside a word for the six low elements and a word move above
//! that. Every lattice operator in this crate reduces to these two moves.

/// Word-level masks of bit positions whose index has bit `i` set, `i < 6`.
pub(crate) const HIGH: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseBits {
    n: u32,
    words: Vec<u64>,
}

impl DenseBits {
    /// Empty family over `[n]`; callers keep `n <= 24`.
    pub fn new(n: u32) -> Self {
        debug_assert!(n <= crate::set::MAX_DENSE);
        let words = if n >= 6 { 1usize << (n - 6) } else { 1 };
        DenseBits { n, words: vec![0; words] }
    }

    pub fn from_masks(n: u32, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut d = DenseBits::new(n);
        for m in masks {
            d.insert(m);
        }
        d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, x: u64) {
        self.words[(x >> 6) as usize] |= 1u64 << (x & 63);
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        let w = (x >> 6) as usize;
        w < self.words.len() && self.words[w] >> (x & 63) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &DenseBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &DenseBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Member masks in increasing order.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(((wi as u64) << 6) | b)
            })
        })
    }

    /// Members containing element `i` (0-based), moved to the set without it.
    pub fn delete_element(&self, i: u32) -> DenseBits {
        let mut out = DenseBits::new(self.n);
        delete_into(&self.words, &mut out.words, i);
        out
    }

    /// Members missing element `i` (0-based), moved to the set with it.
    pub fn add_element(&self, i: u32) -> DenseBits {
        let mut out = DenseBits::new(self.n);
        add_into(&self.words, &mut out.words, i);
        out
    }

    /// Immediate shadow: every set obtained by deleting one element of a member.
    pub fn shadow(&self) -> DenseBits {
        let mut out = DenseBits::new(self.n);
        for i in 0..self.n {
            delete_into(&self.words, &mut out.words, i);
        }
        out
    }

    /// Closure under supersets.
    pub fn up_closure(&self) -> DenseBits {
        let mut cur = self.clone();
        for i in 0..self.n {
            let mut add = DenseBits::new(self.n);
            add_into(&cur.words, &mut add.words, i);
            cur.union_with(&add);
        }
        cur
    }

    /// True iff every member's one-element extensions are members.
    pub fn is_up_closed(&self) -> bool {
        (0..self.n).all(|i| {
            let add = self.add_element(i);
            add.words.iter().zip(&self.words).all(|(a, s)| a & !s == 0)
        })
    }
}

/// `out |= delete_i(src)`.
pub(crate) fn delete_into(src: &[u64], out: &mut [u64], i: u32) {
    if i < 6 {
        let sh = 1u32 << i;
        for (o, &s) in out.iter_mut().zip(src) {
            *o |= (s & HIGH[i as usize]) >> sh;
        }
    } else {
        let stride = 1usize << (i - 6);
        for w in 0..src.len() {
            if w & stride != 0 {
                out[w - stride] |= src[w];
            }
        }
    }
}

/// `out |= add_i(src)`.
pub(crate) fn add_into(src: &[u64], out: &mut [u64], i: u32) {
    if i < 6 {
        let sh = 1u32 << i;
        for (o, &s) in out.iter_mut().zip(src) {
            *o |= (s & !HIGH[i as usize]) << sh;
        }
    } else {
        let stride = 1usize << (i - 6);
        for w in 0..src.len() {
            if w & stride == 0 {
                out[w + stride] |= src[w];
            }
        }
    }
}
