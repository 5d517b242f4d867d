//! Named families and pattern sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::family::SetFamily;
use crate::set::{ElementSet, GroundSize};

/// Named families with O(1) membership, usable for any `n <= 64`.
/// [`Construction::build`] materialises them for `n <= 24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// All sets containing element 1.
    Star { n: GroundSize },
    /// `B(1, r)`: sets meeting `[r + 1]` in at least `r` elements.
    BraceDaykin { n: GroundSize, r: u32 },
    /// `T(n, t)`: `{1} ∪ T` with `T ⊆ [2, n]`, `|T| >= (n - 1 + t) / 2`.
    KatonaStyle { n: GroundSize, t: u32 },
}

impl Construction {
    pub fn star(n: u32) -> Result<Self> {
        Ok(Construction::Star { n: GroundSize::new(n)? })
    }

    pub fn brace_daykin(n: u32, r: u32) -> Result<Self> {
        if r < 2 {
            return arg(format!("B(1,r) needs r >= 2, got {r}"));
        }
        if n <= r {
            return arg(format!(
                "B(1,{r}) needs n >= r + 1 = {}; for n <= r no non-trivial {r}-wise intersecting family exists",
                r + 1
            ));
        }
        Ok(Construction::BraceDaykin { n: GroundSize::new(n)?, r })
    }

    pub fn katona_style(n: u32, t: u32) -> Result<Self> {
        if t < 2 || n <= t {
            return arg(format!("T(n,t) needs n > t >= 2, got n = {n}, t = {t}"));
        }
        if (n + t).is_multiple_of(2) {
            return arg(format!(
                "T(n,t) is defined for n + t odd so that (n - 1 + t)/2 is an integer; got n + t = {}",
                n + t
            ));
        }
        Ok(Construction::KatonaStyle { n: GroundSize::new(n)?, t })
    }

    pub fn ground(&self) -> GroundSize {
        match *self {
            Construction::Star { n } | Construction::BraceDaykin { n, .. } | Construction::KatonaStyle { n, .. } => n,
        }
    }

    pub fn contains_mask(&self, m: u64) -> bool {
        match *self {
            Construction::Star { .. } => m & 1 == 1,
            Construction::BraceDaykin { r, .. } => (m & ((1u64 << (r + 1)) - 1)).count_ones() >= r,
            Construction::KatonaStyle { n, t } => {
                m & 1 == 1 && (m >> 1).count_ones() >= (n.get() - 1 + t) / 2
            }
        }
    }

    pub fn contains(&self, s: &ElementSet) -> bool {
        s.ground() == self.ground() && self.contains_mask(s.mask())
    }

    pub fn build(&self) -> Result<SetFamily> {
        let n = self.ground();
        n.require_dense("materialising a construction")?;
        let sets: Vec<u64> = (0..1u64 << n.get()).filter(|&m| self.contains_mask(m)).collect();
        Ok(SetFamily::from_sorted_unchecked(n, sets))
    }
}

pub fn star(n: u32) -> Result<SetFamily> {
    Construction::star(n)?.build()
}

pub fn brace_daykin_family(n: u32, r: u32) -> Result<SetFamily> {
    Construction::brace_daykin(n, r)?.build()
}

pub fn katona_style_family(n: u32, t: u32) -> Result<SetFamily> {
    Construction::katona_style(n, t)?.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    H0,
    T0,
    TPrime,
    TDoublePrime,
    HPrime,
}

impl PatternKind {
    pub const ALL: [PatternKind; 5] =
        [PatternKind::H0, PatternKind::T0, PatternKind::TPrime, PatternKind::TDoublePrime, PatternKind::HPrime];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::H0 => "H0",
            PatternKind::T0 => "T0",
            PatternKind::TPrime => "TPRIME",
            PatternKind::TDoublePrime => "TDOUBLEPRIME",
            PatternKind::HPrime => "HPRIME",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Residues `d mod 3` kept for offsets `d >= 8`.
    fn tail_residues(self) -> [bool; 3] {
        match self {
            PatternKind::T0 => [true, true, false],
            PatternKind::TPrime => [false, true, true],
            PatternKind::TDoublePrime => [true, false, true],
            PatternKind::H0 | PatternKind::HPrime => [false, true, true],
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A residue-class pattern truncated to `[n]`; `n` may exceed 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternSet {
    kind: PatternKind,
    w: u32,
    n: u32,
}

impl PatternSet {
    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn offset(&self) -> u32 {
        self.w
    }

    pub fn limit(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, e: u32) -> bool {
        if e == 0 || e > self.n {
            return false;
        }
        match self.kind {
            PatternKind::H0 => (2..=8).contains(&e) || (e >= 10 && !e.is_multiple_of(3)),
            PatternKind::HPrime => e > self.w && !(e - self.w).is_multiple_of(3),
            k => {
                if e <= self.w {
                    return false;
                }
                let d = e - self.w;
                d <= 7 || k.tail_residues()[(d % 3) as usize]
            }
        }
    }

    /// Elements in increasing order.
    pub fn render(&self) -> Vec<u32> {
        (1..=self.n).filter(|&e| self.contains(e)).collect()
    }

    pub fn to_element_set(&self) -> Result<ElementSet> {
        let g = GroundSize::new(self.n)?;
        ElementSet::from_elements(g, &self.render())
    }
}

/// Renders a pattern; `w` is ignored for `H0`.
pub fn pattern_set(kind: PatternKind, w: u32, n: u32) -> Result<PatternSet> {
    match kind {
        PatternKind::H0 => {
            if n < 8 {
                return arg(format!("H0 contains [2,8], which does not fit in [{n}]"));
            }
            Ok(PatternSet { kind, w: 0, n })
        }
        _ => {
            if w + 8 > n {
                return arg(format!("{kind} with offset w = {w} needs n >= w + 8 = {}, got {n}", w + 8));
            }
            Ok(PatternSet { kind, w, n })
        }
    }
}

/// One of the 64 triples over `[7]` combining per-pair ordered triplets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BigTriple {
    pub a: ElementSet,
    pub b: ElementSet,
    pub c: ElementSet,
}

impl BigTriple {
    pub fn size_sum(&self) -> u32 {
        self.a.size() + self.b.size() + self.c.size()
    }

    pub fn common(&self) -> ElementSet {
        self.a.intersection(&self.b).intersection(&self.c)
    }
}

/// Pairing of `[2, 7]` used by [`big_triples`].
pub const TRIPLE_PAIRS: [(u32, u32); 3] = [(2, 3), (4, 5), (6, 7)];

/// The four ordered triplets on a pair `{x, y}`, as masks.
pub fn pair_triplets(x: u32, y: u32) -> [(u64, u64, u64); 4] {
    let (x, y) = (1u64 << (x - 1), 1u64 << (y - 1));
    [(0, x, x | y), (x, y, y), (y, x | y, 0), (x | y, 0, x)]
}

pub fn big_triples() -> Vec<BigTriple> {
    let g = GroundSize::new(7).expect("7 is a valid ground size");
    let per_pair: Vec<[(u64, u64, u64); 4]> = TRIPLE_PAIRS.iter().map(|&(x, y)| pair_triplets(x, y)).collect();
    let mut out = Vec::with_capacity(64);
    for p in &per_pair[0] {
        for q in &per_pair[1] {
            for s in &per_pair[2] {
                let mk = |m| ElementSet::from_mask_unchecked(g, m);
                out.push(BigTriple {
                    a: mk(1 | p.0 | q.0 | s.0),
                    b: mk(1 | p.1 | q.1 | s.1),
                    c: mk(p.2 | q.2 | s.2),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::IntersectionProfile;

    fn prof(r: u32, t: u32) -> IntersectionProfile {
        IntersectionProfile::new(r, t).unwrap()
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(3).unwrap(), SetFamily::from_lists(3, &[vec![1u32], vec![1, 2], vec![1, 3], vec![1, 2, 3]]).unwrap());
        assert_eq!(star(1).unwrap().len(), 1);
        assert_eq!(star(5).unwrap().len(), 16);
        assert!(star(25).is_err());
        let lazy = Construction::star(40).unwrap();
        let g = GroundSize::new(40).unwrap();
        assert!(lazy.contains(&ElementSet::from_elements(g, &[1, 39]).unwrap()));
        assert!(!lazy.contains(&ElementSet::from_elements(g, &[2, 39]).unwrap()));
    }

    #[test]
    fn brace_daykin_examples() {
        let b = brace_daykin_family(5, 3).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b.is_nontrivial());
        assert!(b.is_r_wise_t_intersecting(prof(3, 1)));
        assert!(b.is_initial());
        assert_eq!(brace_daykin_family(4, 3).unwrap().len(), 5);
        assert!(brace_daykin_family(3, 3).is_err());
        assert!(brace_daykin_family(5, 1).is_err());
    }

    #[test]
    fn katona_examples() {
        let t = katona_style_family(5, 2).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.intersection_degree(2).unwrap(), 3);
        assert!(t.is_initial());
        assert!(katona_style_family(7, 2).unwrap().is_r_wise_t_intersecting(prof(3, 1)));
        assert!(katona_style_family(6, 2).is_err());
        assert!(katona_style_family(5, 1).is_err());
        assert!(katona_style_family(3, 3).is_err());
    }

    #[test]
    fn pattern_prefixes() {
        assert_eq!(pattern_set(PatternKind::H0, 0, 14).unwrap().render(), vec![2, 3, 4, 5, 6, 7, 8, 10, 11, 13, 14]);
        assert_eq!(pattern_set(PatternKind::H0, 0, 54).unwrap().render().len(), 37);
        assert_eq!(pattern_set(PatternKind::T0, 0, 13).unwrap().render(), vec![1, 2, 3, 4, 5, 6, 7, 9, 10, 12, 13]);
        // listed prefixes: T' = [w+1,w+7] ∪ {w+8,w+10,w+11,w+13}, T'' = ... ∪ {w+8,w+9,w+11,w+12}
        let w = 54;
        let tail = |k| pattern_set(k, w, w + 13).unwrap().render().into_iter().filter(|&e| e > w + 7).collect::<Vec<_>>();
        assert_eq!(tail(PatternKind::T0), vec![w + 9, w + 10, w + 12, w + 13]);
        assert_eq!(tail(PatternKind::TPrime), vec![w + 8, w + 10, w + 11, w + 13]);
        assert_eq!(tail(PatternKind::TDoublePrime), vec![w + 8, w + 9, w + 11, w + 12]);
        assert_eq!(
            pattern_set(PatternKind::HPrime, w, w + 8).unwrap().render(),
            vec![w + 1, w + 2, w + 4, w + 5, w + 7, w + 8]
        );
        // H' is the tail of H0 past an offset divisible by 3
        let h0 = pattern_set(PatternKind::H0, 0, 100).unwrap();
        let hp = pattern_set(PatternKind::HPrime, 54, 100).unwrap();
        assert!((55..=100).all(|e| h0.contains(e) == hp.contains(e)));
    }

    #[test]
    fn pattern_errors() {
        assert!(pattern_set(PatternKind::H0, 0, 7).is_err());
        assert!(pattern_set(PatternKind::T0, 54, 61).is_err());
        assert!(pattern_set(PatternKind::T0, 54, 62).is_ok());
        assert!(pattern_set(PatternKind::T0, 0, 100).unwrap().to_element_set().is_err());
        assert_eq!(PatternKind::parse("tprime"), Some(PatternKind::TPrime));
    }

    #[test]
    fn big_triple_shape() {
        let ts = big_triples();
        assert_eq!(ts.len(), 64);
        for t in &ts {
            assert_eq!(t.size_sum(), 11);
            assert!(t.common().is_empty());
            assert!(t.a.contains(1) && t.b.contains(1) && !t.c.contains(1));
        }
    }
}
