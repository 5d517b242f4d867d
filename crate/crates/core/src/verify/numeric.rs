//! Exact checks of the numeric inequalities of the Case-1 argument.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::constructions::{pattern_set, PatternKind};
use crate::error::Result;
use crate::exact::{binomial_tail, pow2, QuadInt};

use super::ClaimReport;

fn h0_prefix_count(n: u32) -> u32 {
    // H0 = [2,8] ∪ {e >= 10 : 3 ∤ e}
    (1..=n).filter(|&e| (2..=8).contains(&e) || (e >= 10 && e % 3 != 0)).count() as u32
}

/// `|H0 ∩ [3t]| = 2t + 1` for every `3 <= t <= n/3`.
pub fn verify_eq8(n: u32) -> ClaimReport {
    let start = Instant::now();
    let r = ClaimReport::new("eq8").param("n", n);
    if n < 9 {
        return r.skipped(format!("needs n >= 9, got {n}")).timed(start);
    }
    let h0 = pattern_set(PatternKind::H0, 0, n).expect("n >= 9");
    let mut count = 0u32;
    let mut checked = 0u32;
    for e in 1..=n - n % 3 {
        count += h0.contains(e) as u32;
        if e % 3 == 0 && e >= 9 {
            let t = e / 3;
            checked += 1;
            if count != 2 * t + 1 {
                return r
                    .refuted(json!({ "t": t, "count": count, "expected": 2 * t + 1 }), format!("|H0 ∩ [{e}]| = {count}"))
                    .timed(start);
            }
        }
    }
    r.verified(format!("identity holds for all {checked} values 3 <= t <= {}", n / 3)).timed(start)
}

pub(crate) fn eq8_default() -> ClaimReport {
    let start = Instant::now();
    let ns = [18u32, 100, 10_000];
    let reports: Vec<ClaimReport> = ns.iter().map(|&n| verify_eq8(n)).collect();
    let r = ClaimReport::new("eq8").param("n", ns);
    match reports.into_iter().find(|x| x.is_refuted()) {
        Some(bad) => r.refuted(bad.witness.unwrap(), bad.details),
        None => r.verified(format!("identity holds for n in {ns:?}")),
    }
    .timed(start)
}

/// `divisor · (Σ_{i >= threshold} C(w, i) - δ) < 2^w`, where `δ = 1` removes
/// `H0 ∩ [w]` when it is among the counted sets.
pub fn verify_eq9(w: u32, threshold: u64, divisor: u64) -> Result<ClaimReport> {
    let start = Instant::now();
    let r = ClaimReport::new("eq9").param("w", w).param("threshold", threshold).param("divisor", divisor);
    if threshold > w as u64 {
        return Ok(r.skipped(format!("threshold {threshold} exceeds w = {w}")).timed(start));
    }
    if divisor == 0 {
        return Ok(r.skipped("divisor must be positive").timed(start));
    }
    let tail = binomial_tail(w as u64, threshold)?;
    let h = h0_prefix_count(w) as u64;
    let removed = (h >= threshold) as u32;
    let g0 = &tail - removed;
    let lhs = &g0 * divisor;
    let rhs = pow2(w);
    // four decimal digits of |G0| / 2^w for the report only
    let permyriad = (&g0 * 10_000u32) / &rhs;
    let details = format!(
        "|G0| = {g0} (tail {tail} minus {removed} for the {h}-element H0 prefix), {divisor}·|G0| = {lhs} vs 2^{w} = {rhs}; |G0|/2^{w} ≈ 0.{permyriad:0>4}"
    );
    let ok = lhs < rhs;
    Ok(r.decide(ok, || json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string(), "g0": g0.to_string() }), details)
        .timed(start))
}

/// `multiplier · ((√5 - 1)/2)^8 < 1`, with the power formed by three exact
/// squarings.
pub fn verify_eq10_constant(multiplier: u64) -> Result<ClaimReport> {
    let start = Instant::now();
    let r = ClaimReport::new("eq10").param("multiplier", multiplier);
    if multiplier == 0 {
        return Ok(r.skipped("multiplier must be >= 1").timed(start));
    }
    let x8 = QuadInt::golden_conjugate().square_times(3);
    let closed = QuadInt::new(47, -21, 1);
    if x8 != closed {
        return Ok(r.refuted(json!({ "value": x8.to_string() }), "repeated squaring disagrees with (47 - 21√5)/2").timed(start));
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let scaled = x8.scale(multiplier);
    let ord = scaled.cmp_rational(&one);
    // (a + b√5)/2^k < 1  <=>  a - 2^k < -b√5
    let (a, b, k) = scaled.parts();
    let (x, y) = (a - pow2(k), -b);
    let (xs, ys) = (&x * &x, &y * &y * 5u32);
    let rel = match xs.cmp(&ys) {
        Ordering::Less => "<",
        Ordering::Greater => ">",
        Ordering::Equal => "=",
    };
    let details = format!("((√5-1)/2)^8 = {x8}; decided by {x}² {rel} 5·{y}² ({xs} vs {ys})");
    Ok(r.decide(
        ord == Ordering::Less,
        || json!({ "value": x8.to_string(), "multiplier": multiplier, "lhs_squared": xs.to_string(), "rhs_squared": ys.to_string() }),
        details,
    )
    .timed(start))
}

/// The Case-1 budget `1/13 + 5/32 + (1 - 1/13 - 5/16)/46 < 1/4` and the two
/// replacement counts.
pub fn verify_case1_budget() -> ClaimReport {
    let start = Instant::now();
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let one = q(1, 1);
    let g0 = q(1, 13);
    let g2 = q(5, 16);
    let budget = &g0 + &g2 / q(2, 1) + (&one - &g0 - &g2) / q(46, 1);
    let quarter = q(1, 4);
    let w = 54i64;
    let h = h0_prefix_count(w as u32) as i64;
    let first = (3 * 33, 2 * w - 7);
    let second = (33 + 33 + h, 2 * w - 5);
    let ok = budget < quarter && first.0 < first.1 && second.0 <= second.1;
    let details = format!(
        "budget = {}/{} < 1/4; 3·33 = {} < 2·{w} - 7 = {}; 33 + 33 + {h} = {} <= 2·{w} - 5 = {}. \
         The G2 bound is applied as a fraction of 2^w, matching the displayed sum. \
         Members of G2 other than the H0 prefix have at most 32 elements, so the 3·33 count has slack.",
        budget.numer(),
        budget.denom(),
        first.0,
        first.1,
        second.0,
        second.1
    );
    ClaimReport::new("case1-budget")
        .decide(
            ok,
            || {
                json!({
                    "budget": format!("{}/{}", budget.numer(), budget.denom()),
                    "first": [first.0, first.1],
                    "second": [second.0, second.1],
                })
            },
            details,
        )
        .timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn eq8_examples() {
        assert_eq!(h0_prefix_count(9), 7);
        assert_eq!(h0_prefix_count(12), 9);
        assert_eq!(h0_prefix_count(54), 37);
        for n in [9, 18, 100, 10_000] {
            assert_eq!(verify_eq8(n).status, Status::Verified, "n = {n}");
        }
        assert_eq!(verify_eq8(8).status, Status::SkippedPrecondition);
        assert_eq!(eq8_default().status, Status::Verified);
    }

    #[test]
    fn eq9_sweep() {
        assert_eq!(verify_eq9(54, 33, 13).unwrap().status, Status::Verified);
        assert_eq!(verify_eq9(54, 40, 13).unwrap().status, Status::Verified);
        let bad = verify_eq9(54, 28, 13).unwrap();
        assert_eq!(bad.status, Status::Refuted);
        assert!(bad.witness.is_some());
        assert_eq!(verify_eq9(54, 55, 13).unwrap().status, Status::SkippedPrecondition);
        // raising the threshold never turns verified into refuted
        let mut seen_verified = false;
        for th in 0..=54 {
            let s = verify_eq9(54, th, 13).unwrap().status;
            if seen_verified {
                assert_eq!(s, Status::Verified, "threshold {th}");
            }
            seen_verified |= s == Status::Verified;
        }
    }

    #[test]
    fn eq10_edge() {
        assert_eq!(verify_eq10_constant(46).unwrap().status, Status::Verified);
        assert_eq!(verify_eq10_constant(47).unwrap().status, Status::Refuted);
        assert_eq!(verify_eq10_constant(1).unwrap().status, Status::Verified);
        assert!(verify_eq10_constant(46).unwrap().details.contains("1080² < 5·483²"));
        assert!(verify_eq10_constant(47).unwrap().details.contains("2207² > 5·987²"));
    }

    #[test]
    fn case1() {
        let r = verify_case1_budget();
        assert_eq!(r.status, Status::Verified);
        assert!(r.details.starts_with("budget = 1179/4784"));
    }
}
