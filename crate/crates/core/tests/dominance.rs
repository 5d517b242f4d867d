use std::collections::VecDeque;

use setfam_core::set::dominates_mask;
use setfam_core::{dominates_sorted, ElementSet, GroundSize};

/// Sets reachable from `b` by replacing an element with a smaller absent one
/// or by adding an element.
fn reachable(n: u32, b: u64) -> Vec<bool> {
    let mut seen = vec![false; 1 << n];
    let mut queue = VecDeque::from([b]);
    seen[b as usize] = true;
    while let Some(x) = queue.pop_front() {
        let mut next = Vec::new();
        for j in 0..n {
            if x >> j & 1 == 0 {
                next.push(x | 1 << j);
                continue;
            }
            for i in 0..j {
                if x >> i & 1 == 0 {
                    next.push(x & !(1 << j) | 1 << i);
                }
            }
        }
        for y in next {
            if !seen[y as usize] {
                seen[y as usize] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

#[test]
fn closed_form_matches_transitive_closure() {
    for n in 1..=6 {
        let g = GroundSize::new(n).unwrap();
        for b in 0..1u64 << n {
            let closure = reachable(n, b);
            let bs = ElementSet::from_mask(g, b).unwrap();
            for a in 0..1u64 << n {
                let as_ = ElementSet::from_mask(g, a).unwrap();
                assert_eq!(dominates_mask(a, b), closure[a as usize], "n = {n}, a = {as_}, b = {bs}");
                assert_eq!(as_.dominates(&bs).unwrap(), closure[a as usize]);
                assert_eq!(dominates_sorted(&as_.elements(), &bs.elements()), closure[a as usize]);
            }
        }
    }
}
