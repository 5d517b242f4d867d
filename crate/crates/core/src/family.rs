//! Families of subsets of `[n]` and the operators on them.
//!
//! A [`SetFamily`] stores its members as a sorted, duplicate-free list of
//! masks, so structural equality is set equality. Operators that sweep the
//! whole lattice (closure, shadow) go through [`DenseBits`] when `n <= 24`.

use std::fmt;

use crate::dense::DenseBits;
use crate::error::{arg, Error, Result};
use crate::set::{dominates_mask, ElementSet, GroundSize};

/// An `r`-wise `t`-intersecting requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct IntersectionProfile {
    r: u32,
    t: u32,
}

impl IntersectionProfile {
    pub fn new(r: u32, t: u32) -> Result<Self> {
        if r < 2 {
            return arg(format!("intersection arity r must be >= 2, got {r}"));
        }
        Ok(IntersectionProfile { r, t })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

impl fmt::Display for IntersectionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-wise {}-intersecting", self.r, self.t)
    }
}

#[derive(Clone)]
pub struct SetFamily {
    n: GroundSize,
    sets: Vec<u64>,
    /// Label offset for display: element `k` is shown as `k + offset`.
    offset: u32,
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sets == other.sets
    }
}

impl Eq for SetFamily {}

impl std::hash::Hash for SetFamily {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.sets.hash(state);
    }
}

impl SetFamily {
    pub fn empty(n: GroundSize) -> Self {
        SetFamily { n, sets: Vec::new(), offset: 0 }
    }

    /// All `2^n` subsets.
    pub fn power_set(n: GroundSize) -> Result<Self> {
        n.require_dense("the power set")?;
        Ok(SetFamily { n, sets: (0..1u64 << n.get()).collect(), offset: 0 })
    }

    /// Builds a family from masks, validating range and removing duplicates.
    pub fn from_masks(n: GroundSize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let full = n.full_mask();
        let mut sets: Vec<u64> = masks.into_iter().collect();
        if let Some(bad) = sets.iter().find(|&&m| m & !full != 0) {
            return arg(format!("mask {bad:#x} has elements outside [{n}]"));
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(SetFamily { n, sets, offset: 0 })
    }

    pub(crate) fn from_sorted_unchecked(n: GroundSize, sets: Vec<u64>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        SetFamily { n, sets, offset: 0 }
    }

    pub fn from_sets(n: GroundSize, sets: impl IntoIterator<Item = ElementSet>) -> Result<Self> {
        let mut masks = Vec::new();
        for s in sets {
            if s.ground() != n {
                return arg(format!("set {s} has ground size {}, family has {n}", s.ground()));
            }
            masks.push(s.mask());
        }
        Self::from_masks(n, masks)
    }

    /// Builds a family from lists of 1-based elements.
    pub fn from_lists<L: AsRef<[u32]>>(n: u32, lists: &[L]) -> Result<Self> {
        let n = GroundSize::new(n)?;
        let sets = lists
            .iter()
            .map(|l| ElementSet::from_elements(n, l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(n, sets)
    }

    pub fn from_dense(n: GroundSize, bits: &DenseBits) -> Self {
        SetFamily { n, sets: bits.masks().collect(), offset: 0 }
    }

    pub fn to_dense(&self) -> Result<DenseBits> {
        self.n.require_dense("dense representation")?;
        Ok(DenseBits::from_masks(self.n.get(), self.sets.iter().copied()))
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Member masks in canonical (increasing) order.
    #[inline]
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.sets.iter().map(move |&m| ElementSet::from_mask_unchecked(self.n, m))
    }

    #[inline]
    pub fn contains_mask(&self, m: u64) -> bool {
        self.sets.binary_search(&m).is_ok()
    }

    pub fn contains(&self, s: &ElementSet) -> bool {
        s.ground() == self.n && self.contains_mask(s.mask())
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn with_offset(mut self, offset: u32) -> Self {
        self.offset = offset;
        self
    }

    fn same_ground(&self, other: &SetFamily) -> Result<()> {
        if self.n != other.n {
            return arg(format!("ground sizes differ ({} vs {})", self.n, other.n));
        }
        Ok(())
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_ground(other)?;
        let mut sets = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.sets.len() && j < other.sets.len() {
            let (a, b) = (self.sets[i], other.sets[j]);
            if a <= b {
                sets.push(a);
                i += 1;
                if a == b {
                    j += 1;
                }
            } else {
                sets.push(b);
                j += 1;
            }
        }
        sets.extend_from_slice(&self.sets[i..]);
        sets.extend_from_slice(&other.sets[j..]);
        Ok(SetFamily::from_sorted_unchecked(self.n, sets))
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_ground(other)?;
        let sets = self.sets.iter().copied().filter(|&m| other.contains_mask(m)).collect();
        Ok(SetFamily::from_sorted_unchecked(self.n, sets))
    }

    /// True iff every superset of every member is a member.
    pub fn is_upset(&self) -> bool {
        let full = self.n.full_mask();
        self.sets.iter().all(|&m| {
            let mut missing = full & !m;
            while missing != 0 {
                let b = missing & missing.wrapping_neg();
                if !self.contains_mask(m | b) {
                    return false;
                }
                missing &= missing - 1;
            }
            true
        })
    }

    /// Smallest up-set containing the family.
    pub fn upset_closure(&self) -> Result<SetFamily> {
        let d = self.to_dense()?;
        Ok(SetFamily::from_dense(self.n, &d.up_closure()))
    }

    /// Immediate shadow `∂F`.
    pub fn shadow(&self) -> SetFamily {
        if self.n.is_dense() {
            let d = DenseBits::from_masks(self.n.get(), self.sets.iter().copied());
            return SetFamily::from_dense(self.n, &d.shadow());
        }
        let mut out: Vec<u64> = Vec::new();
        for &m in &self.sets {
            let mut rest = m;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                out.push(m & !b);
                rest &= rest - 1;
            }
        }
        out.sort_unstable();
        out.dedup();
        SetFamily::from_sorted_unchecked(self.n, out)
    }

    /// `σ(F) = F ∪ ∂F`.
    pub fn sigma(&self) -> SetFamily {
        self.union(&self.shadow()).expect("same ground")
    }

    /// Inclusion-minimal members.
    pub fn minimal_members(&self) -> SetFamily {
        SetFamily { n: self.n, sets: minimal_masks(&self.sets), offset: self.offset }
    }

    /// `t(F, r)`: the smallest common intersection over `r` members, repetition
    /// allowed.
    pub fn intersection_degree(&self, r: u32) -> Result<u32> {
        if r < 2 {
            return arg(format!("intersection arity r must be >= 2, got {r}"));
        }
        if self.is_empty() {
            return Err(Error::Undefined("intersection degree of the empty family".into()));
        }
        let min = minimal_masks(&self.sets);
        let k = (r as usize).min(min.len());
        Ok(min_k_intersection(&min, k))
    }

    /// Vacuously true for the empty family.
    pub fn is_r_wise_t_intersecting(&self, p: IntersectionProfile) -> bool {
        if self.is_empty() {
            return true;
        }
        let min = minimal_masks(&self.sets);
        all_k_intersections_at_least(&min, (p.r as usize).min(min.len()), p.t)
    }

    /// Intersection of all members; `[n]` for the empty family.
    pub fn common_intersection(&self) -> ElementSet {
        let bits = self.sets.iter().fold(self.n.full_mask(), |acc, &m| acc & m);
        ElementSet::from_mask_unchecked(self.n, bits)
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.is_empty() && self.common_intersection().is_empty()
    }

    /// The elementary shift `S_ij`, `1 <= i < j <= n`.
    pub fn shift(&self, i: u32, j: u32) -> Result<SetFamily> {
        if !(1 <= i && i < j && j <= self.n.get()) {
            return arg(format!("shift needs 1 <= i < j <= {}, got i = {i}, j = {j}", self.n));
        }
        Ok(self.shift_unchecked(i - 1, j - 1).0)
    }

    /// Shift with 0-based positions; also reports whether anything moved.
    fn shift_unchecked(&self, i: u32, j: u32) -> (SetFamily, bool) {
        let (bi, bj) = (1u64 << i, 1u64 << j);
        let mut moved = false;
        let mut out: Vec<u64> = self
            .sets
            .iter()
            .map(|&m| {
                if m & bj != 0 && m & bi == 0 {
                    let target = (m & !bj) | bi;
                    if !self.contains_mask(target) {
                        moved = true;
                        return target;
                    }
                }
                m
            })
            .collect();
        if moved {
            out.sort_unstable();
        }
        (SetFamily { n: self.n, sets: out, offset: self.offset }, moved)
    }

    /// Repeats lexicographic sweeps of all shifts until a sweep changes nothing.
    pub fn make_initial(&self) -> SetFamily {
        let n = self.n.get();
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in i + 1..n {
                    let (next, moved) = cur.shift_unchecked(i, j);
                    if moved {
                        cur = next;
                        changed = true;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Up-set that is closed under replacing any element by a smaller one.
    pub fn is_initial(&self) -> bool {
        self.is_upset()
            && self.sets.iter().all(|&m| {
                // adjacent decrements generate every same-size move
                let movable = m & !(m << 1) & !1;
                let mut rest = movable;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    if !self.contains_mask((m & !b) | (b >> 1)) {
                        return false;
                    }
                    rest &= rest - 1;
                }
                true
            })
    }

    /// `F(S, [s])`: tails `F \ S` of the members meeting `[s]` exactly in `S`,
    /// re-indexed onto `[n - s]`. Requires `s < n`.
    pub fn trace(&self, s_set: &ElementSet, s: u32) -> Result<SetFamily> {
        let n = self.n.get();
        if s >= n {
            return arg(format!("trace prefix length must be < n = {n}, got {s}"));
        }
        if s_set.ground() != self.n {
            return arg("trace selector has a different ground size");
        }
        let low = (1u64 << s) - 1;
        if s_set.mask() & !low != 0 {
            return arg(format!("selector {s_set} is not contained in [{s}]"));
        }
        let tail_n = GroundSize::new(n - s)?;
        let sets = self
            .sets
            .iter()
            .filter(|&&m| m & low == s_set.mask())
            .map(|&m| m >> s)
            .collect::<Vec<_>>();
        let mut sets = sets;
        sets.sort_unstable();
        Ok(SetFamily { n: tail_n, sets, offset: self.offset + s })
    }

    /// `F(1)`: the members containing element 1 with it removed, over `[2, n]`.
    pub fn link_of_first(&self) -> Result<SetFamily> {
        let one = ElementSet::from_mask_unchecked(self.n, 1);
        self.trace(&one, 1)
    }

    /// The definition read literally: `b ∈ F` and `a ≺ b` imply `a ∈ F`.
    /// Quadratic in `2^n`; used to cross-check [`SetFamily::is_initial`].
    pub fn is_initial_by_definition(&self) -> Result<bool> {
        self.n.require_dense("the definitional initial check")?;
        let all = 1u64 << self.n.get();
        Ok(self
            .sets
            .iter()
            .all(|&b| (0..all).all(|a| !dominates_mask(a, b) || self.contains_mask(a))))
    }

    /// Whether some permutation of the ground set maps `self` onto `other`.
    /// Tries all `n!` permutations, so only small ground sets are accepted.
    pub fn is_isomorphic(&self, other: &SetFamily) -> Result<bool> {
        use itertools::Itertools;
        let n = self.n.get();
        if n > 8 {
            return Err(Error::Capacity(format!("isomorphism test needs n <= 8, got {n}")));
        }
        if self.n != other.n || self.len() != other.len() {
            return Ok(false);
        }
        let sizes = |f: &SetFamily| f.sets.iter().map(|m| m.count_ones()).sorted().collect::<Vec<_>>();
        if sizes(self) != sizes(other) {
            return Ok(false);
        }
        Ok((0..n).permutations(n as usize).any(|perm| {
            let mut image: Vec<u64> = self
                .sets
                .iter()
                .map(|&m| perm.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |a, (_, &p)| a | 1 << p))
                .collect();
            image.sort_unstable();
            image == other.sets
        }))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, {self})", self.n)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, s) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (i, e) in s.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + self.offset)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Inclusion-minimal masks, returned sorted.
pub(crate) fn minimal_masks(sets: &[u64]) -> Vec<u64> {
    let mut by_size: Vec<u64> = sets.to_vec();
    by_size.sort_unstable_by_key(|m| (m.count_ones(), *m));
    let mut min: Vec<u64> = Vec::new();
    for m in by_size {
        if !min.iter().any(|&x| x & !m == 0) {
            min.push(m);
        }
    }
    min.sort_unstable();
    min
}

/// Smallest `|A_1 ∩ ... ∩ A_k|` over `k`-subsets of `sets` (`1 <= k <= len`).
///
/// Over multisets of size `r >= k = min(r, len)` the minimum is attained on
/// distinct members, since repeating a member never shrinks the intersection.
pub(crate) fn min_k_intersection(sets: &[u64], k: usize) -> u32 {
    fn rec(sets: &[u64], start: usize, left: usize, acc: u64, best: &mut u32) {
        if *best == 0 {
            return;
        }
        if left == 0 {
            *best = (*best).min(acc.count_ones());
            return;
        }
        for i in start..=sets.len() - left {
            rec(sets, i + 1, left - 1, acc & sets[i], best);
        }
    }
    let mut best = u32::MAX;
    rec(sets, 0, k, u64::MAX, &mut best);
    best
}

pub(crate) fn all_k_intersections_at_least(sets: &[u64], k: usize, t: u32) -> bool {
    fn rec(sets: &[u64], start: usize, left: usize, acc: u64, t: u32) -> bool {
        if acc.count_ones() < t {
            return false;
        }
        if left == 0 {
            return true;
        }
        (start..=sets.len() - left).all(|i| rec(sets, i + 1, left - 1, acc & sets[i], t))
    }
    rec(sets, 0, k, u64::MAX, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, lists: &[&[u32]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn star(n: u32) -> SetFamily {
        let g = GroundSize::new(n).unwrap();
        SetFamily::from_masks(g, (0..1u64 << n).filter(|m| m & 1 == 1)).unwrap()
    }

    fn p(r: u32, t: u32) -> IntersectionProfile {
        IntersectionProfile::new(r, t).unwrap()
    }

    #[test]
    fn upset_examples() {
        assert!(fam(3, &[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]).is_upset());
        assert!(!fam(2, &[&[1]]).is_upset());
        assert!(SetFamily::empty(GroundSize::new(5).unwrap()).is_upset());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(fam(2, &[&[1]]).upset_closure().unwrap(), fam(2, &[&[1], &[1, 2]]));
        assert_eq!(fam(3, &[&[2, 3]]).upset_closure().unwrap(), fam(3, &[&[2, 3], &[1, 2, 3]]));
        let e = SetFamily::empty(GroundSize::new(4).unwrap());
        assert_eq!(e.upset_closure().unwrap(), e);
        let big = SetFamily::from_lists(30, &[[1u32]]).unwrap();
        assert!(matches!(big.upset_closure(), Err(Error::Capacity(_))));
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(fam(3, &[&[1, 2, 3]]).shadow(), fam(3, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(fam(3, &[&[1, 2], &[1, 3]]).shadow(), fam(3, &[&[1], &[2], &[3]]));
        assert!(fam(3, &[&[]]).shadow().is_empty());
    }

    #[test]
    fn sparse_shadow_beyond_dense_limit() {
        let f = SetFamily::from_lists(40, &[vec![1u32, 30, 40], vec![2, 30]]).unwrap();
        let expect = SetFamily::from_lists(
            40,
            &[vec![30u32, 40], vec![1, 40], vec![1, 30], vec![30], vec![2]],
        )
        .unwrap();
        assert_eq!(f.shadow(), expect);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(fam(3, &[&[1, 2, 3]]).sigma().len(), 4);
        assert!(SetFamily::empty(GroundSize::new(3).unwrap()).sigma().is_empty());
        assert_eq!(star(3).sigma().len(), 8);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(fam(3, &[&[1, 2], &[1, 3], &[1, 2, 3]]).intersection_degree(2).unwrap(), 1);
        assert!(matches!(
            SetFamily::empty(GroundSize::new(3).unwrap()).intersection_degree(2),
            Err(Error::Undefined(_))
        ));
        assert!(fam(3, &[&[1]]).intersection_degree(1).is_err());
        // repetition allowed: a single member gives its own size
        assert_eq!(fam(4, &[&[1, 2, 3]]).intersection_degree(3).unwrap(), 3);
    }

    #[test]
    fn intersecting_examples() {
        assert!(star(3).is_r_wise_t_intersecting(p(3, 1)));
        assert!(!fam(4, &[&[1, 2], &[3, 4]]).is_r_wise_t_intersecting(p(2, 1)));
        assert!(SetFamily::empty(GroundSize::new(3).unwrap()).is_r_wise_t_intersecting(p(2, 9)));
        assert!(IntersectionProfile::new(1, 1).is_err());
    }

    #[test]
    fn nontrivial_examples() {
        let s = star(4);
        assert_eq!(s.common_intersection().elements(), vec![1]);
        assert!(!s.is_nontrivial());
        let e = SetFamily::empty(GroundSize::new(4).unwrap());
        assert_eq!(e.common_intersection().size(), 4);
        assert!(!e.is_nontrivial());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(fam(2, &[&[2]]).shift(1, 2).unwrap(), fam(2, &[&[1]]));
        assert_eq!(fam(2, &[&[1], &[2]]).shift(1, 2).unwrap(), fam(2, &[&[1], &[2]]));
        assert_eq!(fam(3, &[&[2, 3]]).shift(1, 3).unwrap(), fam(3, &[&[1, 2]]));
        assert!(fam(3, &[&[2]]).shift(2, 2).is_err());
        assert!(fam(3, &[&[2]]).shift(2, 1).is_err());
        assert!(fam(3, &[&[2]]).shift(1, 4).is_err());
    }

    #[test]
    fn make_initial_examples() {
        assert_eq!(star(4).make_initial(), star(4));
        assert_eq!(fam(2, &[&[2]]).make_initial(), fam(2, &[&[1]]));
        assert_eq!(fam(3, &[&[2, 3]]).make_initial(), fam(3, &[&[1, 2]]));
    }

    #[test]
    fn initial_examples() {
        assert!(star(3).is_initial());
        assert!(!fam(2, &[&[2], &[1, 2]]).is_initial());
        assert!(!fam(2, &[&[1]]).is_initial(), "not an up-set");
    }

    #[test]
    fn minimal_examples() {
        assert_eq!(star(3).minimal_members(), fam(3, &[&[1]]));
        assert_eq!(
            fam(3, &[&[1, 2], &[1, 2, 3], &[2, 3]]).minimal_members(),
            fam(3, &[&[1, 2], &[2, 3]])
        );
        let e = SetFamily::empty(GroundSize::new(3).unwrap());
        assert_eq!(e.minimal_members(), e);
    }

    #[test]
    fn trace_examples() {
        let g3 = GroundSize::new(3).unwrap();
        let one = ElementSet::from_elements(g3, &[1]).unwrap();
        let t = star(3).trace(&one, 1).unwrap();
        assert_eq!(t, fam(2, &[&[], &[1], &[2], &[1, 2]]));
        assert_eq!(t.offset(), 1);
        assert_eq!(t.to_string(), "{{},{2},{3},{2,3}}");
        assert!(star(3).trace(&ElementSet::empty(g3), 1).unwrap().is_empty());
        let two = ElementSet::from_elements(g3, &[2]).unwrap();
        assert!(star(3).trace(&two, 1).is_err());
        assert!(star(3).trace(&one, 3).is_err());
    }

    #[test]
    fn display_and_union() {
        let a = fam(3, &[&[1], &[2, 3]]);
        let b = fam(3, &[&[2, 3], &[3]]);
        assert_eq!(a.union(&b).unwrap().to_string(), "{{1},{3},{2,3}}");
        assert_eq!(a.intersection(&b).unwrap().len(), 1);
        assert!(a.union(&star(4)).is_err());
    }

    #[test]
    fn isomorphism() {
        let a = fam(3, &[&[1], &[1, 2]]);
        let b = fam(3, &[&[3], &[2, 3]]);
        let c = fam(3, &[&[3], &[1, 2]]);
        assert!(a.is_isomorphic(&b).unwrap());
        assert!(!a.is_isomorphic(&c).unwrap());
        assert!(!a.is_isomorphic(&star(3)).unwrap());
    }
}
