//! Family-level statements: instance checks and their randomized suites.

use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use crate::constructions::{brace_daykin_family, katona_style_family};
use crate::error::Result;
use crate::family::{minimal_masks, IntersectionProfile, SetFamily};
use crate::search::enumerate_initial;

use super::random::{family, instance_rng, random_intersecting, random_mask, upset};
use super::{family_json, ClaimParams, ClaimReport, Status};

fn profile(r: u32, t: u32) -> IntersectionProfile {
    IntersectionProfile::new(r, t).expect("r >= 2")
}

/// Some `ℓ >= 0` has `|F ∩ [3ℓ + t]| >= 2ℓ + t`, prefixes truncated at `n`.
fn has_prefix_property(mask: u64, n: u32, t: u32) -> bool {
    let mut l = 0u32;
    loop {
        let hi = (3 * l + t).min(n);
        let prefix = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 };
        if (mask & prefix).count_ones() >= 2 * l + t {
            return true;
        }
        if 3 * l + t >= n {
            return false;
        }
        l += 1;
    }
}

fn set_json(f: &SetFamily, mask: u64) -> Value {
    json!((0..f.ground().get()).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>())
}

/// Every member of an initial 3-wise `t`-intersecting family satisfies the
/// prefix inequality for some `ℓ`.
pub fn verify_prop11(f: &SetFamily, t: u32) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("prop11").param("t", t).param("family_size", f.len());
    if t == 0 {
        return r.skipped("t must be >= 1").timed(start);
    }
    if !f.is_initial() {
        return r.skipped("family is not initial").timed(start);
    }
    if !f.is_r_wise_t_intersecting(profile(3, t)) {
        return r.skipped(format!("family is not 3-wise {t}-intersecting")).timed(start);
    }
    let n = f.ground().get();
    match f.masks().iter().find(|&&m| !has_prefix_property(m, n, t)) {
        Some(&m) => r.refuted(json!({ "family": family_json(f), "member": set_json(f, m) }), "member without a good prefix"),
        None => r.verified(format!("all {} members have a good prefix", f.len())),
    }
    .timed(start)
}

/// `|∂F| >= 2|F|` when every member has some `|F ∩ [3ℓ + 2]| >= 2ℓ + 2`.
pub fn verify_thm12(f: &SetFamily) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("thm12").param("family_size", f.len());
    let n = f.ground().get();
    if let Some(&m) = f.masks().iter().find(|&&m| !has_prefix_property(m, n, 2)) {
        return r.skipped(format!("member {} has no good prefix", set_json(f, m))).timed(start);
    }
    let (s, size) = (f.shadow().len(), f.len());
    r.decide(
        s >= 2 * size,
        || json!({ "family": family_json(f), "shadow": s, "size": size }),
        format!("|∂F| = {s}, 2|F| = {}", 2 * size),
    )
    .timed(start)
}

/// `|σ(F)| > 2|F|` for non-empty 3-wise 2-intersecting families.
pub fn verify_cor10(f: &SetFamily) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("cor10").param("family_size", f.len());
    if f.is_empty() {
        return r.skipped("family is empty").timed(start);
    }
    if !f.is_r_wise_t_intersecting(profile(3, 2)) {
        return r.skipped("family is not 3-wise 2-intersecting").timed(start);
    }
    let (s, size) = (f.sigma().len(), f.len());
    r.decide(
        s > 2 * size,
        || json!({ "family": family_json(f), "sigma": s, "size": size }),
        format!("|σ(F)| = {s}, 2|F| = {}", 2 * size),
    )
    .timed(start)
}

/// `2^n |F1 ∩ F2| >= |F1| |F2|` for up-sets on a common ground set.
pub fn verify_kleitman(f1: &SetFamily, f2: &SetFamily) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("kleitman").param("sizes", [f1.len(), f2.len()]);
    if f1.ground() != f2.ground() {
        return r.skipped("families live on different ground sets").timed(start);
    }
    if !f1.is_upset() || !f2.is_upset() {
        return r.skipped("both families must be up-sets").timed(start);
    }
    let n = f1.ground().get();
    let common = f1.intersection(f2).expect("same ground").len() as u128;
    let lhs = common << n;
    let rhs = f1.len() as u128 * f2.len() as u128;
    r.decide(
        lhs >= rhs,
        || json!({ "f1": family_json(f1), "f2": family_json(f2) }),
        format!("2^{n}·{common} = {lhs} vs {}·{} = {rhs}", f1.len(), f2.len()),
    )
    .timed(start)
}

/// Smallest `|A ∩ B ∩ C|` over transversals; members can be replaced by
/// minimal members without changing it.
fn cross_min(a: &SetFamily, b: &SetFamily, c: &SetFamily) -> u32 {
    let (ma, mb, mc) = (minimal_masks(a.masks()), minimal_masks(b.masks()), minimal_masks(c.masks()));
    let mut best = u32::MAX;
    for &x in &ma {
        for &y in &mb {
            let xy = x & y;
            for &z in &mc {
                best = best.min((xy & z).count_ones());
                if best == 0 {
                    return 0;
                }
            }
        }
    }
    best
}

fn same_ground(a: &SetFamily, b: &SetFamily, c: &SetFamily) -> bool {
    a.ground() == b.ground() && b.ground() == c.ground()
}

/// `|A| + |B| + |C| < 2^n` for non-trivial cross-intersecting triples.
pub fn verify_cross_triple(a: &SetFamily, b: &SetFamily, c: &SetFamily) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("cross-triple").param("sizes", [a.len(), b.len(), c.len()]);
    if !same_ground(a, b, c) {
        return r.skipped("families live on different ground sets").timed(start);
    }
    if !(a.is_nontrivial() && b.is_nontrivial() && c.is_nontrivial()) {
        return r.skipped("every family must be non-trivial").timed(start);
    }
    if cross_min(a, b, c) < 1 {
        return r.skipped("triple is not cross-intersecting").timed(start);
    }
    let n = a.ground().get();
    let sum = (a.len() + b.len() + c.len()) as u128;
    r.decide(
        sum < 1u128 << n,
        || json!({ "a": family_json(a), "b": family_json(b), "c": family_json(c) }),
        format!("|A| + |B| + |C| = {sum} vs 2^{n} = {}", 1u128 << n),
    )
    .timed(start)
}

/// Cross-`t`-intersecting `A, B, C` with `t >= 2` make `σ(A), B, C`
/// cross-`(t - 1)`-intersecting.
pub fn verify_observation(a: &SetFamily, b: &SetFamily, c: &SetFamily, t: u32) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("observation").param("t", t).param("sizes", [a.len(), b.len(), c.len()]);
    if t < 2 {
        return r.skipped("t must be >= 2").timed(start);
    }
    if !same_ground(a, b, c) {
        return r.skipped("families live on different ground sets").timed(start);
    }
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return r.skipped("empty family").timed(start);
    }
    if cross_min(a, b, c) < t {
        return r.skipped(format!("triple is not cross-{t}-intersecting")).timed(start);
    }
    let got = cross_min(&a.sigma(), b, c);
    r.decide(
        got + 1 >= t,
        || json!({ "a": family_json(a), "b": family_json(b), "c": family_json(c), "t": t }),
        format!("min |A' ∩ B ∩ C| over A' ∈ σ(A) is {got}"),
    )
    .timed(start)
}

/// `σ(F)` is intersecting whenever `F` is 2-wise 3-intersecting.
pub fn verify_sigma_bridge(f: &SetFamily) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("sigma-bridge").param("family_size", f.len());
    if !f.is_r_wise_t_intersecting(profile(2, 3)) {
        return r.skipped("family is not 2-wise 3-intersecting").timed(start);
    }
    let s = f.sigma();
    r.decide(
        s.is_r_wise_t_intersecting(profile(2, 1)),
        || json!({ "family": family_json(f) }),
        format!("σ(F) has {} members and is intersecting", s.len()),
    )
    .timed(start)
}

/// Outcome of many instance checks folded into one report.
struct Fold {
    checked: u64,
    skipped: u64,
    first_refuted: Option<ClaimReport>,
}

impl Fold {
    fn new() -> Self {
        Fold { checked: 0, skipped: 0, first_refuted: None }
    }

    fn add(&mut self, r: ClaimReport) {
        match r.status {
            Status::Verified => self.checked += 1,
            Status::SkippedPrecondition => self.skipped += 1,
            Status::Refuted => {
                self.checked += 1;
                if self.first_refuted.is_none() {
                    self.first_refuted = Some(r);
                }
            }
        }
    }

    fn report(self, id: &str, p: &ClaimParams, exhaustive: &str, start: Instant) -> ClaimReport {
        let r = ClaimReport::new(id)
            .param("seed", p.seed)
            .param("instances", p.instances)
            .param("checked", self.checked)
            .param("skipped", self.skipped);
        match self.first_refuted {
            Some(bad) => r.refuted(
                bad.witness.unwrap_or(Value::Null),
                format!("refuted: {}", bad.details),
            ),
            None if self.checked == 0 => r.skipped("no instance met the precondition"),
            None => r.verified(format!(
                "{} instances checked, {} skipped by precondition; {exhaustive}",
                self.checked, self.skipped
            )),
        }
        .timed(start)
    }
}

/// Runs `gen_check` on `p.instances` seeded indices in parallel and folds the
/// reports in index order after the fixed `fixed` reports.
fn suite(
    id: &str,
    tag: u64,
    p: &ClaimParams,
    fixed: Vec<ClaimReport>,
    exhaustive: &str,
    gen_check: impl Fn(&mut rand_chacha::ChaCha8Rng) -> ClaimReport + Sync,
) -> ClaimReport {
    use rayon::prelude::*;
    let start = Instant::now();
    let random: Vec<ClaimReport> = (0..p.instances as u64)
        .into_par_iter()
        .map(|i| gen_check(&mut instance_rng(p.seed, tag, i)))
        .collect();
    let mut fold = Fold::new();
    fixed.into_iter().chain(random).for_each(|r| fold.add(r));
    fold.report(id, p, exhaustive, start)
}

fn initial_families(n: u32) -> Vec<SetFamily> {
    let mut out = Vec::new();
    enumerate_initial(n, |f| out.push(f.clone())).expect("n <= 8");
    out
}

pub(crate) fn prop11_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let mut fixed = vec![verify_prop11(&katona_style_family(5, 2)?, 1), verify_prop11(&brace_daykin_family(5, 3)?, 1)];
    for n in 1..=5 {
        for f in initial_families(n) {
            for t in 1..=3 {
                if f.is_r_wise_t_intersecting(profile(3, t)) {
                    fixed.push(verify_prop11(&f, t));
                }
            }
        }
    }
    Ok(suite("prop11", 11, p, fixed, "exhaustive over initial families n <= 5", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(4..=10));
        let t = rng.gen_range(1..=3);
        let f = random_intersecting(rng, n, 3, t, true).make_initial();
        verify_prop11(&f, t)
    }))
}

pub(crate) fn thm12_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let mut fixed = vec![
        verify_thm12(&SetFamily::from_lists(2, &[[1u32, 2]])?),
        verify_thm12(&SetFamily::from_lists(4, &[vec![1u32, 2]])?.upset_closure()?),
    ];
    // every family of premise sets for n <= 4
    for n in 1..=4u32 {
        let good: Vec<u64> = (0..1u64 << n).filter(|&m| has_prefix_property(m, n, 2)).collect();
        for pick in 1..1u64 << good.len() {
            let masks = good.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m).collect();
            fixed.push(verify_thm12(&family(n, masks)));
        }
    }
    Ok(suite("thm12", 12, p, fixed, "exhaustive over families of premise sets n <= 4", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(3..=10));
        let want = rng.gen_range(1..=24);
        let mut masks = Vec::new();
        for _ in 0..want * 8 {
            if masks.len() == want {
                break;
            }
            let m = random_mask(rng, n);
            if has_prefix_property(m, n, 2) {
                masks.push(m);
            }
        }
        let f = family(n, masks);
        if rng.gen_bool(0.3) {
            verify_thm12(&f.upset_closure().expect("dense ground"))
        } else {
            verify_thm12(&f)
        }
    }))
}

pub(crate) fn cor10_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let mut fixed = vec![verify_cor10(&SetFamily::from_lists(4, &[vec![1u32, 2]])?.upset_closure()?)];
    for n in 2..=5 {
        for f in initial_families(n) {
            fixed.push(verify_cor10(&f));
        }
    }
    Ok(suite("cor10", 10, p, fixed, "exhaustive over initial families n <= 5", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(3..=10));
        let up = rng.gen_bool(0.5);
        let f = random_intersecting(rng, n, 3, 2, up);
        if rng.gen_bool(0.5) {
            verify_cor10(&f.make_initial())
        } else {
            verify_cor10(&f)
        }
    }))
}

pub(crate) fn kleitman_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let s1 = crate::constructions::star(3)?;
    let star2 = SetFamily::from_lists(3, &[vec![2u32]])?.upset_closure()?;
    let fixed = vec![verify_kleitman(&s1, &s1), verify_kleitman(&s1, &star2)];
    Ok(suite("kleitman", 1, p, fixed, "fixed star cases included", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(1..=10));
        let gen = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = rng.gen_range(0..=6);
            upset(n, (0..k).map(|_| random_mask(rng, n)).collect())
        };
        let (a, b) = (gen(rng), gen(rng));
        verify_kleitman(&a, &b)
    }))
}

pub(crate) fn cross_triple_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let b13 = brace_daykin_family(5, 3)?;
    let mut fixed = vec![verify_cross_triple(&b13, &b13, &b13)];
    let all: Vec<SetFamily> = {
        let mut v = Vec::new();
        crate::search::enumerate_upsets(3, |f| v.push(f.clone()))?;
        v
    };
    for a in &all {
        for b in &all {
            for c in &all {
                fixed.push(verify_cross_triple(a, b, c));
            }
        }
    }
    Ok(suite("cross-triple", 7, p, fixed, "exhaustive over all up-set triples n = 3", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(4..=10));
        // subfamilies of {F : |F ∩ R| >= h} with 3h > 2|R| are cross-intersecting
        let r_size = rng.gen_range(4..=n);
        let r_mask = super::random::random_set_of_size(rng, n, r_size);
        let h = 2 * r_size / 3 + 1;
        let gen = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = rng.gen_range(1..=8);
            let mut masks: Vec<u64> = Vec::new();
            let mut avoid = 0u64;
            // add random admissible sets, then one avoiding each common element
            while masks.len() < k || masks.iter().fold(u64::MAX, |a, &m| a & m) != 0 {
                if masks.len() >= k {
                    let common = masks.iter().fold(u64::MAX, |a, &m| a & m);
                    avoid = common & common.wrapping_neg();
                }
                let m = random_mask(rng, n) & !avoid;
                if (m & r_mask).count_ones() >= h {
                    masks.push(m);
                }
            }
            upset(n, masks)
        };
        let (a, b, c) = (gen(rng), gen(rng), gen(rng));
        verify_cross_triple(&a, &b, &c)
    }))
}

pub(crate) fn observation_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let one = SetFamily::from_lists(3, &[[1u32, 2, 3]])?;
    let t52 = katona_style_family(5, 2)?;
    let fixed = vec![verify_observation(&one, &one, &one, 3), verify_observation(&t52, &t52, &t52, 2)];
    Ok(suite("observation", 2, p, fixed, "fixed cases included", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(2..=10));
        let t = rng.gen_range(2..=n.min(4));
        // a shared core makes the triple cross-t-intersecting
        let core = super::random::random_set_of_size(rng, n, t);
        let gen = |rng: &mut rand_chacha::ChaCha8Rng, up: bool| {
            let k = rng.gen_range(1..=8);
            let masks = super::random::random_cored_sets(rng, n, core, k);
            if up {
                upset(n, masks)
            } else {
                family(n, masks)
            }
        };
        let (ua, ub, uc) = (rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_bool(0.5));
        let (a, b, c) = (gen(rng, ua), gen(rng, ub), gen(rng, uc));
        if rng.gen_bool(0.5) {
            verify_observation(&a, &b, &c, t)
        } else {
            // large sets: any three of size >= (2n + t)/3 share t elements
            let s = super::random::forcing_size(n, 3, t);
            let big = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.gen_range(1..=8);
                family(n, super::random::random_large_sets(rng, n, s, k))
            };
            let (a, b, c) = (big(rng), big(rng), big(rng));
            verify_observation(&a, &b, &c, t)
        }
    }))
}

pub(crate) fn sigma_bridge_suite(p: &ClaimParams) -> Result<ClaimReport> {
    let fixed = vec![
        verify_sigma_bridge(&katona_style_family(7, 2)?),
        verify_sigma_bridge(&SetFamily::from_lists(4, &[[1u32, 2, 3, 4]])?),
    ];
    Ok(suite("sigma-bridge", 3, p, fixed, "fixed cases included", |rng| {
        let n = p.n.unwrap_or_else(|| rng.gen_range(3..=10));
        let up = rng.gen_bool(0.5);
        verify_sigma_bridge(&random_intersecting(rng, n, 2, 3, up))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::from_lists(n, sets).unwrap()
    }

    #[test]
    fn prefix_property() {
        assert!(has_prefix_property(0b1, 5, 1));
        assert!(!has_prefix_property(0b110, 3, 1));
        // {2,3,4}: ℓ = 1 gives |F ∩ [4]| = 3
        assert!(has_prefix_property(0b1110, 5, 1));
    }

    #[test]
    fn prop11_examples() {
        assert_eq!(verify_prop11(&katona_style_family(5, 2).unwrap(), 1).status, Status::Verified);
        assert_eq!(verify_prop11(&brace_daykin_family(5, 3).unwrap(), 1).status, Status::Verified);
        let not_initial = fam(2, &[&[2], &[1, 2]]);
        assert_eq!(verify_prop11(&not_initial, 1).status, Status::SkippedPrecondition);
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(verify_thm12(&fam(2, &[&[1, 2]])).status, Status::Verified);
        let up12 = fam(4, &[&[1, 2]]).upset_closure().unwrap();
        let r = verify_thm12(&up12);
        assert_eq!(r.details, "|∂F| = 11, 2|F| = 8");
        let c = verify_cor10(&up12);
        assert_eq!(c.status, Status::Verified);
        assert_eq!(c.details, "|σ(F)| = 12, 2|F| = 8");
        assert_eq!(verify_cor10(&SetFamily::empty(up12.ground())).status, Status::SkippedPrecondition);
    }

    #[test]
    fn kleitman_examples() {
        let s = crate::constructions::star(3).unwrap();
        let r = verify_kleitman(&s, &s);
        assert_eq!(r.status, Status::Verified);
        let s2 = fam(3, &[&[2]]).upset_closure().unwrap();
        assert_eq!(verify_kleitman(&s, &s2).details, "2^3·2 = 16 vs 4·4 = 16");
        assert_eq!(verify_kleitman(&fam(3, &[&[1]]), &s).status, Status::SkippedPrecondition);
    }

    #[test]
    fn triple_examples() {
        let b = brace_daykin_family(5, 3).unwrap();
        let r = verify_cross_triple(&b, &b, &b);
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.details, "|A| + |B| + |C| = 30 vs 2^5 = 32");
        let s = crate::constructions::star(5).unwrap();
        assert_eq!(verify_cross_triple(&s, &b, &b).status, Status::SkippedPrecondition);
        let one = fam(3, &[&[1, 2, 3]]);
        assert_eq!(verify_observation(&one, &one, &one, 3).status, Status::Verified);
        let t = katona_style_family(5, 2).unwrap();
        // T(5,2) is cross-2- but not cross-3-intersecting: {1,2,3,4} ∩ {1,2,3,5} ∩ {1,2,4,5} = {1,2}
        assert_eq!(verify_observation(&t, &t, &t, 2).status, Status::Verified);
        assert_eq!(verify_observation(&t, &t, &t, 3).status, Status::SkippedPrecondition);
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(verify_sigma_bridge(&katona_style_family(7, 2).unwrap()).status, Status::Verified);
        assert_eq!(verify_sigma_bridge(&fam(4, &[&[1, 2, 3, 4]])).status, Status::Verified);
        assert_eq!(verify_sigma_bridge(&fam(4, &[&[1, 2]])).status, Status::SkippedPrecondition);
    }

    #[test]
    fn small_suites_are_deterministic() {
        let p = ClaimParams { instances: 200, ..Default::default() };
        for f in [kleitman_suite, sigma_bridge_suite, observation_suite] {
            let a = f(&p).unwrap();
            let b = f(&p).unwrap();
            assert_eq!(a.status, Status::Verified, "{}", a.details);
            assert_eq!(a.to_json(false), b.to_json(false));
        }
    }
}
