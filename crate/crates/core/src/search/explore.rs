//! Depth-first enumeration of down-sets in a finite order.
//!
//! The families we enumerate (up-sets, initial families) are exactly the sets
//! closed under a "must also contain" relation: supersets for up-sets, every
//! `A ≺ B` for initial families. Such a family is the closure of its
//! generating antichain, and DFS over antichains listed in increasing index
//! order visits each family exactly once. A node is identified by its path of
//! generator indices, which is all a checkpoint needs to store.

use crate::family::{IntersectionProfile, SetFamily};
use crate::set::{dominates_mask, GroundSize};

use super::bits::Bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum LatticeOrder {
    /// Closure under supersets: enumerates all up-sets.
    Inclusion,
    /// Closure under the shifting/inclusion order: enumerates initial families.
    Shifting,
}

pub(crate) struct Lattice<B> {
    n: u32,
    size: usize,
    order: LatticeOrder,
    /// Members forced by choosing each set.
    closure: Vec<B>,
    /// Closure ∪ the sets whose closure contains this one.
    comparable: Vec<B>,
    profiles: Vec<IntersectionProfile>,
}

#[derive(Clone)]
pub(crate) struct Frame<B> {
    pub gen: Option<usize>,
    pub family: B,
    pub forbidden: B,
    /// Length of the member stack belonging to this frame and its ancestors.
    pub members_len: usize,
}

impl<B: Bits> Lattice<B> {
    pub fn new(n: u32, order: LatticeOrder, profiles: Vec<IntersectionProfile>) -> Self {
        let size = 1usize << n;
        let rel = |a: u64, b: u64| match order {
            LatticeOrder::Inclusion => a & b == b,
            LatticeOrder::Shifting => dominates_mask(a, b),
        };
        let mut closure = vec![B::default(); size];
        let mut comparable = vec![B::default(); size];
        for x in 0..size {
            for y in 0..size {
                if rel(y as u64, x as u64) {
                    closure[x].set(y);
                    comparable[x].set(y);
                }
                if rel(x as u64, y as u64) {
                    comparable[x].set(y);
                }
            }
        }
        Lattice { n, size, order, closure, comparable, profiles }
    }

    pub fn root(&self) -> Frame<B> {
        Frame { gen: None, family: B::default(), forbidden: B::default(), members_len: 0 }
    }

    /// Child of `parent` obtained by adding generator `c`, if admissible.
    /// `members` is the shared stack of collected members; on success the new
    /// inclusion-minimal members are pushed, otherwise it is left unchanged.
    pub fn child(&self, parent: &Frame<B>, c: usize, members: &mut Vec<u64>) -> Option<Frame<B>> {
        if parent.forbidden.get(c) || parent.gen.is_some_and(|g| c <= g) {
            return None;
        }
        members.truncate(parent.members_len);
        let family = parent.family.or(self.closure[c]);
        match self.order {
            LatticeOrder::Inclusion => members.push(c as u64),
            LatticeOrder::Shifting => {
                let fresh = self.closure[c].andnot(parent.family);
                fresh.for_each_set(|x| {
                    let mut rest = x as u64;
                    let mut minimal = true;
                    while rest != 0 {
                        let b = rest & rest.wrapping_neg();
                        if family.get((x as u64 & !b) as usize) {
                            minimal = false;
                            break;
                        }
                        rest &= rest - 1;
                    }
                    if minimal {
                        members.push(x as u64);
                    }
                });
            }
        }
        if !self.fresh_members_ok(members, parent.members_len) {
            members.truncate(parent.members_len);
            return None;
        }
        Some(Frame {
            gen: Some(c),
            family,
            forbidden: parent.forbidden.or(self.comparable[c]),
            members_len: members.len(),
        })
    }

    /// Checks every profile on tuples containing at least one member at
    /// index `>= fresh`.
    fn fresh_members_ok(&self, members: &[u64], fresh: usize) -> bool {
        fn rec(members: &[u64], start: usize, left: u32, acc: u64, t: u32) -> bool {
            if acc.count_ones() < t {
                return false;
            }
            if left == 0 {
                return true;
            }
            (start..members.len()).all(|i| rec(members, i, left - 1, acc & members[i], t))
        }
        self.profiles.iter().all(|p| {
            members[fresh..]
                .iter()
                .all(|&x| rec(members, 0, p.r() - 1, x, p.t()))
        })
    }

    /// First admissible child with generator index `>= from`.
    pub fn first_child(&self, parent: &Frame<B>, from: usize, members: &mut Vec<u64>) -> Option<Frame<B>> {
        let mut c = from;
        while let Some(cand) = parent.forbidden.next_clear(c, self.size) {
            if let Some(f) = self.child(parent, cand, members) {
                return Some(f);
            }
            c = cand + 1;
        }
        None
    }

    pub fn children_start(&self, f: &Frame<B>) -> usize {
        f.gen.map_or(0, |g| g + 1)
    }

    /// Union of the closures of every candidate generator still open at `f`.
    pub fn reachable(&self, f: &Frame<B>) -> B {
        let mut acc = f.family;
        let mut c = self.children_start(f);
        while let Some(cand) = f.forbidden.next_clear(c, self.size) {
            acc = acc.or(self.closure[cand]);
            c = cand + 1;
        }
        acc
    }

    pub fn to_family(&self, bits: &B) -> SetFamily {
        let g = GroundSize::new(self.n).expect("lattice ground");
        let mut sets = Vec::with_capacity(bits.count() as usize);
        bits.for_each_set(|i| sets.push(i as u64));
        SetFamily::from_masks(g, sets).expect("masks in range")
    }

    pub fn family_of_path(&self, path: &[u16]) -> SetFamily {
        let mut members = Vec::new();
        let mut f = self.root();
        for &c in path {
            f = self.child(&f, c as usize, &mut members).expect("replayed path is admissible");
        }
        self.to_family(&f.family)
    }
}

/// Pre-order walk of the subtree rooted at a fixed path.
pub(crate) struct Cursor<B> {
    pub stack: Vec<Frame<B>>,
    pub members: Vec<u64>,
    base: usize,
}

impl<B: Bits> Cursor<B> {
    /// Positions the cursor on `path`; the subtree root is the node at depth
    /// `base_depth` along it. Returns `None` if the path is not admissible.
    pub fn at(lat: &Lattice<B>, path: &[u16], base_depth: usize) -> Option<Self> {
        let mut members = Vec::new();
        let mut stack = vec![lat.root()];
        for &c in path {
            let f = lat.child(stack.last().unwrap(), c as usize, &mut members)?;
            stack.push(f);
        }
        Some(Cursor { stack, members, base: base_depth + 1 })
    }

    pub fn top(&self) -> &Frame<B> {
        self.stack.last().unwrap()
    }

    pub fn path(&self) -> Vec<u16> {
        self.stack[1..].iter().map(|f| f.gen.unwrap() as u16).collect()
    }

    /// Moves to the next node in pre-order; `descend = false` skips the
    /// current node's children. Returns false once the subtree is exhausted.
    pub fn advance(&mut self, lat: &Lattice<B>, descend: bool) -> bool {
        if descend {
            let top = self.stack.last().unwrap();
            if let Some(f) = lat.first_child(top, lat.children_start(top), &mut self.members) {
                self.stack.push(f);
                return true;
            }
        }
        while self.stack.len() > self.base {
            let done = self.stack.pop().unwrap();
            let parent = self.stack.last().unwrap();
            if let Some(f) = lat.first_child(parent, done.gen.unwrap() + 1, &mut self.members) {
                self.stack.push(f);
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count<B: Bits>(n: u32, order: LatticeOrder) -> u64 {
        let lat = Lattice::<B>::new(n, order, vec![]);
        let mut cur = Cursor::at(&lat, &[], 0).unwrap();
        let mut c = 1;
        while cur.advance(&lat, true) {
            c += 1;
        }
        c
    }

    #[test]
    fn small_dedekind_numbers() {
        assert_eq!(count::<u64>(1, LatticeOrder::Inclusion), 3);
        assert_eq!(count::<u64>(2, LatticeOrder::Inclusion), 6);
        assert_eq!(count::<u64>(3, LatticeOrder::Inclusion), 20);
        assert_eq!(count::<u64>(4, LatticeOrder::Inclusion), 168);
        assert_eq!(count::<super::super::bits::W4>(4, LatticeOrder::Inclusion), 168);
    }

    #[test]
    fn initial_count_n2() {
        assert_eq!(count::<u64>(2, LatticeOrder::Shifting), 5);
    }
}
