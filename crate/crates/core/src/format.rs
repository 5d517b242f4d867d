//! Plain-text family files.
//!
//! ```text
//! n=4
//! {}
//! 1,3
//! 2,3,4
//! ```
//!
//! The first line gives the ground size; every following line is one member
//! written as strictly increasing comma-separated elements, with `{}` for the
//! empty set. Duplicate members are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::GroundSize;

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let (_, header) = lines.next().unwrap_or((1, ""));
    let n: u32 = match header.trim().strip_prefix("n=") {
        Some(v) => match v.parse() {
            Ok(n) => n,
            Err(_) => return perr(1, format!("bad ground size {v:?}")),
        },
        None => return perr(1, "expected header `n=<int>`"),
    };
    let g = GroundSize::new(n).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    let body: Vec<(usize, &str)> = lines.collect();
    // a single trailing newline leaves one empty final line
    let body = match body.split_last() {
        Some((&(_, ""), rest)) => rest,
        _ => &body[..],
    };
    let mut masks = Vec::with_capacity(body.len());
    for &(ln, raw) in body {
        let line = raw.trim();
        if line.is_empty() {
            return perr(ln, "blank line (write `{}` for the empty set)");
        }
        let mut mask = 0u64;
        if line != "{}" {
            let mut prev = 0u32;
            for tok in line.split(',') {
                let tok = tok.trim();
                let e: u32 = match tok.parse() {
                    Ok(e) => e,
                    Err(_) => return perr(ln, format!("bad element {tok:?}")),
                };
                if e == 0 || e > n {
                    return perr(ln, format!("element {e} outside [1, {n}]"));
                }
                if e <= prev {
                    return perr(ln, format!("elements must be strictly increasing ({prev} then {e})"));
                }
                prev = e;
                mask |= 1u64 << (e - 1);
            }
        }
        masks.push((ln, mask));
    }
    let mut sorted: Vec<(u64, usize)> = masks.iter().map(|&(l, m)| (m, l)).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return perr(w[1].1, format!("duplicate set (first seen on line {})", w[0].1));
    }
    SetFamily::from_masks(g, masks.into_iter().map(|(_, m)| m))
}

/// Writes the family in canonical member order, one set per line.
pub fn write_family(f: &SetFamily) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", f.ground()).unwrap();
    for s in f.iter() {
        if s.is_empty() {
            out.push_str("{}");
        } else {
            for (i, e) in s.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{e}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}
