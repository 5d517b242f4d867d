//! Fixed-width characteristic vectors for the enumeration lattice.
//!
//! Ground sizes up to 6 fit the whole power set in one `u64`; sizes 7 and 8
//! use four words. Both implement [`Bits`] so the DFS is monomorphised per
//! width.

use crate::dense::{delete_into, HIGH};

pub(crate) trait Bits: Copy + Eq + Default + Send + Sync + 'static {
    fn get(&self, i: usize) -> bool;
    fn set(&mut self, i: usize);
    fn or(self, o: Self) -> Self;
    fn andnot(self, o: Self) -> Self;
    fn count(&self) -> u32;
    /// First clear bit with index in `from..limit`.
    fn next_clear(&self, from: usize, limit: usize) -> Option<usize>;
    /// Immediate shadow over a ground set of size `n`.
    fn shadow(&self, n: u32) -> Self;
    fn for_each_set(&self, f: impl FnMut(usize));
}

impl Bits for u64 {
    #[inline]
    fn get(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        *self |= 1 << i;
    }

    #[inline]
    fn or(self, o: Self) -> Self {
        self | o
    }

    #[inline]
    fn andnot(self, o: Self) -> Self {
        self & !o
    }

    #[inline]
    fn count(&self) -> u32 {
        self.count_ones()
    }

    #[inline]
    fn next_clear(&self, from: usize, limit: usize) -> Option<usize> {
        if from >= limit {
            return None;
        }
        let free = !self & (u64::MAX << from);
        let i = free.trailing_zeros() as usize;
        (i < limit).then_some(i)
    }

    #[inline]
    fn shadow(&self, n: u32) -> Self {
        let mut out = 0u64;
        for i in 0..n {
            out |= (self & HIGH[i as usize]) >> (1u32 << i);
        }
        out
    }

    fn for_each_set(&self, mut f: impl FnMut(usize)) {
        let mut w = *self;
        while w != 0 {
            f(w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub(crate) struct W4([u64; 4]);

impl Bits for W4 {
    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    fn or(self, o: Self) -> Self {
        W4([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }

    #[inline]
    fn andnot(self, o: Self) -> Self {
        W4([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2], self.0[3] & !o.0[3]])
    }

    #[inline]
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn next_clear(&self, from: usize, limit: usize) -> Option<usize> {
        let mut wi = from >> 6;
        let mut mask = u64::MAX << (from & 63);
        while wi < 4 && wi << 6 < limit {
            let free = !self.0[wi] & mask;
            if free != 0 {
                let i = (wi << 6) + free.trailing_zeros() as usize;
                return (i < limit).then_some(i);
            }
            wi += 1;
            mask = u64::MAX;
        }
        None
    }

    fn shadow(&self, n: u32) -> Self {
        let mut out = [0u64; 4];
        let used = if n >= 6 { 1usize << (n - 6) } else { 1 };
        for i in 0..n {
            delete_into(&self.0[..used], &mut out[..used], i);
        }
        W4(out)
    }

    fn for_each_set(&self, mut f: impl FnMut(usize)) {
        for (wi, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                f((wi << 6) + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
    }
}
