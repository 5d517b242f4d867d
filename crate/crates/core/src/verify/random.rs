//! Seeded instance generators for the randomized suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::SetFamily;
use crate::set::GroundSize;

/// The generator for instance `index` of a suite; streams are independent.
pub(crate) fn instance_rng(seed: u64, suite: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

/// A uniformly random subset of `[n]` of size `k`, as a mask.
pub(crate) fn random_set_of_size(rng: &mut ChaCha8Rng, n: u32, k: u32) -> u64 {
    let mut elems: Vec<u32> = (0..n).collect();
    elems.shuffle(rng);
    elems[..k as usize].iter().fold(0, |a, &e| a | 1 << e)
}

pub(crate) fn random_mask(rng: &mut ChaCha8Rng, n: u32) -> u64 {
    rng.gen::<u64>() & GroundSize::new(n).expect("n >= 1").full_mask()
}

/// `count` random sets with sizes in `min_size..=n`.
pub(crate) fn random_large_sets(rng: &mut ChaCha8Rng, n: u32, min_size: u32, count: usize) -> Vec<u64> {
    (0..count)
        .map(|_| {
            let k = rng.gen_range(min_size.min(n)..=n);
            random_set_of_size(rng, n, k)
        })
        .collect()
}

/// `count` random sets that all contain a fixed random `core` of size `t`.
pub(crate) fn random_cored_sets(rng: &mut ChaCha8Rng, n: u32, core: u64, count: usize) -> Vec<u64> {
    (0..count).map(|_| core | random_mask(rng, n)).collect()
}

pub(crate) fn family(n: u32, masks: Vec<u64>) -> SetFamily {
    SetFamily::from_masks(GroundSize::new(n).expect("n >= 1"), masks).expect("masks within [n]")
}

/// The up-set generated by `masks`.
pub(crate) fn upset(n: u32, masks: Vec<u64>) -> SetFamily {
    family(n, masks).upset_closure().expect("dense ground")
}

/// Smallest size `s` such that any three `s`-subsets of `[n]` share `t`
/// elements (`r = 3`), or any two share `t` (`r = 2`).
pub(crate) fn forcing_size(n: u32, r: u32, t: u32) -> u32 {
    // r sets of size s meet in at least r·s - (r - 1)·n elements
    ((r - 1) * n + t).div_ceil(r)
}

/// A random family that is `r`-wise `t`-intersecting by construction: either
/// large sets or sets sharing a planted core.
pub(crate) fn random_intersecting(rng: &mut ChaCha8Rng, n: u32, r: u32, t: u32, up: bool) -> SetFamily {
    let count = rng.gen_range(1..=10);
    let masks = if rng.gen_bool(0.5) && forcing_size(n, r, t) <= n {
        random_large_sets(rng, n, forcing_size(n, r, t), count)
    } else {
        let core = random_set_of_size(rng, n, t.min(n));
        random_cored_sets(rng, n, core, count)
    };
    if up {
        upset(n, masks)
    } else {
        family(n, masks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::IntersectionProfile;

    #[test]
    fn streams_are_reproducible() {
        let a: u64 = instance_rng(1, 2, 3).gen();
        let b: u64 = instance_rng(1, 2, 3).gen();
        let c: u64 = instance_rng(1, 2, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_families_intersect() {
        for i in 0..300 {
            let mut rng = instance_rng(7, 0, i);
            let n = rng.gen_range(3..=10);
            let (r, t) = (rng.gen_range(2..=3), rng.gen_range(1..=3));
            let up = rng.gen_bool(0.5);
            let f = random_intersecting(&mut rng, n, r, t.min(n), up);
            assert!(f.is_r_wise_t_intersecting(IntersectionProfile::new(r, t.min(n)).unwrap()));
        }
    }
}
