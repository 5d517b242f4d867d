//! Pattern identities, the 64 big triples, the Case-2 premise and the
//! non-dominated counts.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use crate::constructions::{big_triples, pattern_set, PatternKind};
use crate::error::{arg, Result};
use crate::exact::pow2;
use crate::set::{dominates_mask, dominates_sorted};

use super::ClaimReport;

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Intersection identities of `T0, T', T'', H'` at offset `w`, truncated to
/// `[n]`, and the dominance links `T' ≺ T0`, `T'' ≺ T0`.
pub fn verify_patterns(w: u32, n: u32) -> Result<ClaimReport> {
    let start = Instant::now();
    let r = ClaimReport::new("patterns").param("w", w).param("n", n);
    if n < w + 9 {
        return Ok(r.skipped(format!("needs n >= w + 9 = {}, got {n}", w + 9)).timed(start));
    }
    let render = |k| pattern_set(k, w, n).map(|p| p.render());
    let t0 = render(PatternKind::T0)?;
    let tp = render(PatternKind::TPrime)?;
    let tpp = render(PatternKind::TDoublePrime)?;
    let hp = render(PatternKind::HPrime)?;
    let core = intersect(&intersect(&t0, &tp), &tpp);
    let core_expected: Vec<u32> = (w + 1..=w + 7).collect();
    let five = intersect(&intersect(&tpp, &t0), &hp);
    let five_expected: Vec<u32> = [1, 2, 4, 5, 7].iter().map(|d| w + d).collect();
    let dom1 = dominates_sorted(&tp, &t0);
    let dom2 = dominates_sorted(&tpp, &t0);
    let ok = core == core_expected && five == five_expected && dom1 && dom2;
    let aligned = (n - w) % 3 == 1;
    let details = format!(
        "T0∩T'∩T'' = {core:?}; T''∩T0∩H' = {five:?}; T' ≺ T0: {dom1}; T'' ≺ T0: {dom2}; truncation {}aligned",
        if aligned { "" } else { "not " }
    );
    Ok(r.decide(
        ok,
        || json!({ "t0_tp_tpp": core, "tpp_t0_hp": five, "tp_dominates_t0": dom1, "tpp_dominates_t0": dom2 }),
        details,
    )
    .timed(start))
}

pub(crate) fn patterns_default() -> Result<ClaimReport> {
    let start = Instant::now();
    let cases = [(54u32, 100u32), (0, 13)];
    let mut details = Vec::new();
    for &(w, n) in &cases {
        let r = verify_patterns(w, n)?;
        if r.status != super::Status::Verified {
            return Ok(r.param("w", w).param("n", n).timed(start));
        }
        details.push(format!("(w = {w}, n = {n}) {}", r.details));
    }
    Ok(ClaimReport::new("patterns")
        .param("cases", cases.iter().map(|&(w, n)| json!({ "w": w, "n": n })).collect::<Vec<_>>())
        .verified(details.join("; "))
        .timed(start))
}

/// Count, position bijections, empty common intersections and size sums of
/// the 64 big triples.
pub fn verify_big_triples() -> ClaimReport {
    let start = Instant::now();
    let ts = big_triples();
    let mut problems = Vec::new();
    if ts.len() != 64 {
        problems.push(format!("{} triples", ts.len()));
    }
    let mut hits_a = [0u32; 128];
    let mut hits_b = [0u32; 128];
    let mut hits_c = [0u32; 128];
    for (i, t) in ts.iter().enumerate() {
        if !t.common().is_empty() {
            problems.push(format!("triple {i} has common element(s) {}", t.common()));
        }
        if t.size_sum() != 11 {
            problems.push(format!("triple {i} has size sum {}", t.size_sum()));
        }
        hits_a[t.a.mask() as usize] += 1;
        hits_b[t.b.mask() as usize] += 1;
        hits_c[t.c.mask() as usize] += 1;
    }
    for d in 0..128usize {
        let with_one = d & 1 == 1;
        let (ea, ec) = if with_one { (1, 0) } else { (0, 1) };
        if hits_a[d] != ea || hits_b[d] != ea || hits_c[d] != ec {
            problems.push(format!(
                "subset mask {d:#x} appears {}/{}/{} times in positions A/B/C",
                hits_a[d], hits_b[d], hits_c[d]
            ));
        }
        // total coverage: twice for sets containing 1, once otherwise
        let total = hits_a[d] + hits_b[d] + hits_c[d];
        if total != if with_one { 2 } else { 1 } {
            problems.push(format!("subset mask {d:#x} covered {total} times"));
        }
    }
    let r = ClaimReport::new("big-triples");
    if problems.is_empty() {
        r.verified(
            "64 triples; A and B each biject onto the 64 subsets of [7] containing 1, C onto the 64 subsets of [2,7]; \
             every common intersection is empty and every size sum is 11",
        )
    } else {
        let first = problems[0].clone();
        r.refuted(json!({ "problems": problems }), first)
    }
    .timed(start)
}

/// Whether `T ⊆ [8, m]` (bit `i` is element `8 + i`) has some `ℓ >= 0` with
/// `|T ∩ [8, 3ℓ + 9]| >= 2ℓ + 2`, intervals truncated at `m`.
fn has_tail_property(t: u64, m: u32) -> bool {
    let mut l = 0u32;
    loop {
        let hi = (3 * l + 9).min(m);
        let width = hi - 7;
        let low = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        if (t & low).count_ones() >= 2 * l + 2 {
            return true;
        }
        if 3 * l + 9 >= m {
            return false;
        }
        l += 1;
    }
}

/// Every `T ⊆ [8, m]` without the interval property is dominated by
/// `H0 ∩ [8, m]`, which itself lacks the property.
pub fn verify_case2_premise(m: u32) -> Result<ClaimReport> {
    let start = Instant::now();
    if !(9..=24).contains(&m) {
        return arg(format!("case2-premise supports 9 <= m <= 24, got {m}"));
    }
    let r = ClaimReport::new("case2-premise").param("m", m);
    let width = m - 7;
    let h0 = pattern_set(PatternKind::H0, 0, m)?;
    let h: u64 = (8..=m).filter(|&e| h0.contains(e)).fold(0, |a, e| a | 1 << (e - 8));
    let elems = |t: u64| (0..width).filter(|i| t >> i & 1 == 1).map(|i| i + 8).collect::<Vec<_>>();
    if has_tail_property(h, m) {
        return Ok(r.refuted(json!({ "set": elems(h) }), "H0 ∩ [8, m] has the property").timed(start));
    }
    let mut lacking = 0u64;
    for t in 0..1u64 << width {
        if has_tail_property(t, m) {
            continue;
        }
        lacking += 1;
        if !dominates_mask(h, t) {
            return Ok(r
                .refuted(json!({ "set": elems(t) }), format!("{:?} lacks the property but is not dominated", elems(t)))
                .timed(start));
        }
    }
    Ok(r.verified(format!(
        "{lacking} of {} subsets of [8,{m}] lack the property, all dominated by H0 ∩ [8,{m}]",
        1u64 << width
    ))
    .timed(start))
}

pub(crate) fn case2_default() -> Result<ClaimReport> {
    let start = Instant::now();
    for m in 9..=20 {
        let r = verify_case2_premise(m)?;
        if r.status != super::Status::Verified {
            return Ok(r.timed(start));
        }
    }
    Ok(ClaimReport::new("case2-premise")
        .param("m", "9..=20")
        .verified("premise holds for every m in 9..=20")
        .timed(start))
}

/// `|{T ⊆ [m] : P ⊀ T}|` for a strictly increasing element list `p ⊆ [m]`,
/// `m <= 30`.
pub fn non_dominated_count(p: &[u32], m: u32) -> Result<BigInt> {
    if m > 30 {
        return arg(format!("non_dominated_count supports m <= 30, got {m}"));
    }
    if p.windows(2).any(|w| w[0] >= w[1]) || p.iter().any(|&e| e == 0 || e > m) {
        return arg(format!("P must be a strictly increasing subset of [{m}], got {p:?}"));
    }
    // ways[e] = increasing prefixes t_1 < ... < t_i = e with t_j >= p_j
    let mut dominated = BigInt::from(1); // T = ∅
    let mut ways: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    ways[0] = BigInt::from(1);
    for &pi in p {
        let mut next = vec![BigInt::zero(); m as usize + 1];
        let mut below = BigInt::zero();
        for e in 1..=m as usize {
            below += &ways[e - 1];
            if e as u32 >= pi {
                next[e] = below.clone();
            }
        }
        ways = next;
        dominated += ways.iter().sum::<BigInt>();
    }
    Ok(pow2(m) - dominated)
}

pub(crate) fn non_dominated_suite(m: Option<u32>) -> Result<ClaimReport> {
    let start = Instant::now();
    let r = ClaimReport::new("non-dominated");
    let mut mismatches = Vec::new();
    // brute force over every P, T ⊆ [m] for small m
    for mm in 1..=7u32 {
        for pm in 0..1u64 << mm {
            let p: Vec<u32> = (0..mm).filter(|i| pm >> i & 1 == 1).map(|i| i + 1).collect();
            let brute = (0..1u64 << mm).filter(|&t| !dominates_mask(pm, t)).count();
            if non_dominated_count(&p, mm)? != BigInt::from(brute) {
                mismatches.push(json!({ "p": p, "m": mm, "brute": brute }));
            }
        }
    }
    let examples: [(&[u32], u32, u64); 3] = [(&[1], 3, 4), (&[1, 2, 3, 4, 5, 6, 7], 8, 1), (&[], 5, 31)];
    for (p, mm, want) in examples {
        if non_dominated_count(p, mm)? != BigInt::from(want) {
            mismatches.push(json!({ "p": p, "m": mm, "expected": want }));
        }
    }
    let range: Vec<u32> = match m {
        Some(m) => vec![m],
        None => (8..=30).collect(),
    };
    let mut chart = Vec::new();
    for mm in range {
        if mm < 8 {
            return Ok(r.param("m", mm).skipped("the T0 chart needs m >= 8").timed(start));
        }
        let t0 = pattern_set(PatternKind::T0, 0, mm)?.render();
        let c = non_dominated_count(&t0, mm)?;
        let permyriad = (&c * 10_000u32) / pow2(mm);
        chart.push(format!("m={mm}: {c} (≈0.{permyriad:0>4}·2^m)"));
    }
    let details = format!(
        "counts match brute force on all P, T ⊆ [m], m <= 7; T0 chart against (47 - 21√5)/2 ≈ 0.0213: {}",
        chart.join(", ")
    );
    Ok(r.param("m", m).decide(mismatches.is_empty(), || json!({ "mismatches": mismatches }), details).timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn patterns() {
        assert_eq!(verify_patterns(54, 100).unwrap().status, Status::Verified);
        assert_eq!(verify_patterns(0, 13).unwrap().status, Status::Verified);
        assert_eq!(verify_patterns(54, 62).unwrap().status, Status::SkippedPrecondition);
        assert_eq!(patterns_default().unwrap().status, Status::Verified);
    }

    #[test]
    fn triples() {
        assert_eq!(verify_big_triples().status, Status::Verified);
    }

    #[test]
    fn tail_property() {
        // [8, m] has it with ℓ = 0; ∅ lacks it
        assert!(has_tail_property(0b11, 9));
        assert!(!has_tail_property(0, 20));
        assert!(verify_case2_premise(8).is_err());
        assert!(verify_case2_premise(25).is_err());
        assert_eq!(verify_case2_premise(20).unwrap().status, Status::Verified);
    }

    #[test]
    fn non_dominated() {
        assert_eq!(non_dominated_count(&[1], 3).unwrap(), BigInt::from(4));
        assert_eq!(non_dominated_count(&[1, 2, 3, 4, 5, 6, 7], 8).unwrap(), BigInt::from(1));
        assert_eq!(non_dominated_count(&[], 5).unwrap(), BigInt::from(31));
        assert!(non_dominated_count(&[2, 1], 3).is_err());
        assert!(non_dominated_count(&[4], 3).is_err());
        assert!(non_dominated_count(&[1], 31).is_err());
        assert_eq!(non_dominated_suite(Some(12)).unwrap().status, Status::Verified);
    }
}
