//! Addressable verification claims.
//!
//! Every claim yields a [`ClaimReport`]. Verdicts are decided with exact
//! integer, rational or quadratic-integer arithmetic; randomized suites draw
//! each instance from its own ChaCha stream, so reports depend only on the
//! seed and are independent of thread scheduling.

mod families;
mod numeric;
mod random;
mod structure;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::SetFamily;

pub use families::{
    verify_cor10, verify_cross_triple, verify_kleitman, verify_observation, verify_prop11, verify_sigma_bridge,
    verify_thm12,
};
pub use numeric::{verify_case1_budget, verify_eq10_constant, verify_eq8, verify_eq9};
pub use structure::{non_dominated_count, verify_big_triples, verify_case2_premise, verify_patterns};

/// Default seed of the randomized suites.
pub const DEFAULT_SEED: u64 = 0xF11;
/// Default number of random instances per suite.
pub const DEFAULT_INSTANCES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Refuted,
    SkippedPrecondition,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::SkippedPrecondition => "skipped_precondition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
    pub details: String,
}

impl ClaimReport {
    pub(crate) fn new(claim: &str) -> Self {
        ClaimReport {
            claim: claim.to_string(),
            params: BTreeMap::new(),
            status: Status::Verified,
            witness: None,
            elapsed_ms: 0,
            details: String::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(v).expect("param serialises"));
        self
    }

    pub(crate) fn skipped(mut self, why: impl Into<String>) -> Self {
        self.status = Status::SkippedPrecondition;
        self.details = why.into();
        self
    }

    pub(crate) fn refuted(mut self, witness: Value, details: impl Into<String>) -> Self {
        self.status = Status::Refuted;
        self.witness = Some(witness);
        self.details = details.into();
        self
    }

    pub(crate) fn verified(mut self, details: impl Into<String>) -> Self {
        self.status = Status::Verified;
        self.details = details.into();
        self
    }

    /// `verified` or `refuted` according to `ok`.
    pub(crate) fn decide(self, ok: bool, witness: impl FnOnce() -> Value, details: impl Into<String>) -> Self {
        if ok {
            self.verified(details)
        } else {
            self.refuted(witness(), details)
        }
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    /// The JSON object of one report; `elapsed_ms` is zero unless `timings`.
    pub fn to_json(&self, timings: bool) -> Value {
        json!({
            "claim": self.claim,
            "params": self.params,
            "status": self.status,
            "witness": self.witness,
            "elapsed_ms": if timings { self.elapsed_ms } else { 0 },
            "details": self.details,
        })
    }
}

pub(crate) fn family_json(f: &SetFamily) -> Value {
    json!({ "n": f.ground().get(), "sets": f.iter().map(|s| s.elements()).collect::<Vec<_>>() })
}

/// Claim identifiers in report order.
pub const CLAIM_IDS: [&str; 15] = [
    "eq8",
    "eq9",
    "eq10",
    "case1-budget",
    "patterns",
    "big-triples",
    "prop11",
    "thm12",
    "cor10",
    "kleitman",
    "cross-triple",
    "observation",
    "sigma-bridge",
    "case2-premise",
    "non-dominated",
];

/// Optional overrides of claim parameters; unset values use each claim's
/// defaults.
#[derive(Debug, Clone)]
pub struct ClaimParams {
    pub multiplier: Option<u64>,
    pub w: Option<u32>,
    pub threshold: Option<u64>,
    pub divisor: Option<u64>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub seed: u64,
    pub instances: usize,
}

impl Default for ClaimParams {
    fn default() -> Self {
        ClaimParams {
            multiplier: None,
            w: None,
            threshold: None,
            divisor: None,
            n: None,
            m: None,
            seed: DEFAULT_SEED,
            instances: DEFAULT_INSTANCES,
        }
    }
}

/// Runs one claim by identifier.
pub fn run_claim(id: &str, p: &ClaimParams) -> Result<ClaimReport> {
    let mut r = match id {
        "eq8" => match p.n {
            Some(n) => verify_eq8(n),
            None => numeric::eq8_default(),
        },
        "eq9" => verify_eq9(p.w.unwrap_or(54), p.threshold.unwrap_or(33), p.divisor.unwrap_or(13))?,
        "eq10" => verify_eq10_constant(p.multiplier.unwrap_or(46))?,
        "case1-budget" => verify_case1_budget(),
        "patterns" => match (p.w, p.n) {
            (None, None) => structure::patterns_default()?,
            (w, n) => {
                let w = w.unwrap_or(54);
                verify_patterns(w, n.unwrap_or(w + 46))?
            }
        },
        "big-triples" => verify_big_triples(),
        "case2-premise" => match p.m {
            Some(m) => verify_case2_premise(m)?,
            None => structure::case2_default()?,
        },
        "non-dominated" => structure::non_dominated_suite(p.m)?,
        "prop11" => families::prop11_suite(p)?,
        "thm12" => families::thm12_suite(p)?,
        "cor10" => families::cor10_suite(p)?,
        "kleitman" => families::kleitman_suite(p)?,
        "cross-triple" => families::cross_triple_suite(p)?,
        "observation" => families::observation_suite(p)?,
        "sigma-bridge" => families::sigma_bridge_suite(p)?,
        other => {
            return Err(Error::Argument(format!(
                "unknown claim '{other}'; expected one of {} or all",
                CLAIM_IDS.join(", ")
            )))
        }
    };
    r.claim = id.to_string();
    Ok(r)
}

/// Runs every claim in [`CLAIM_IDS`] order; claims run concurrently but the
/// output order is fixed.
pub fn run_all(p: &ClaimParams) -> Result<Vec<ClaimReport>> {
    use rayon::prelude::*;
    CLAIM_IDS.par_iter().map(|id| run_claim(id, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_claim() {
        assert!(matches!(run_claim("bogus", &ClaimParams::default()), Err(Error::Argument(_))));
    }

    #[test]
    fn json_shape() {
        let r = ClaimReport::new("x").param("k", 3).verified("ok");
        let v = r.to_json(false);
        assert_eq!(v["status"], "verified");
        assert_eq!(v["params"]["k"], 3);
        assert_eq!(v["witness"], Value::Null);
        let s = ClaimReport::new("y").skipped("no");
        assert_eq!(s.to_json(false)["status"], "skipped_precondition");
    }
}
