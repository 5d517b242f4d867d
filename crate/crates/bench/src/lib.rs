//! Benchmark fixtures shared by the criterion targets.

use setfam_core::{SetFamily, GroundSize};

/// All subsets of `[n]` of size at least `k`.
pub fn large_sets(n: u32, k: u32) -> SetFamily {
    let g = GroundSize::new(n).expect("n in range");
    SetFamily::from_masks(g, (0..1u64 << n).filter(|m| m.count_ones() >= k)).expect("masks in range")
}
