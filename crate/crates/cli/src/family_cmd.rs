use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;
use setfam_core::constructions::{pattern_set, PatternKind};
use setfam_core::{
    brace_daykin_family, dominates_sorted, katona_style_family, parse_family, star, write_family, ElementSet, Error,
    SetFamily,
};

use crate::output;
use crate::{OutputFormat, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// All sets containing 1.
    Star,
    /// Sets meeting `[r + 1]` in at least `r` elements.
    BraceDaykin,
    /// `{1} ∪ T` with `T ⊆ [2, n]` large.
    Katona,
}

#[derive(Args, Debug)]
pub struct Io {
    /// Family file, or `-` for stdin.
    input: String,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Build a named family.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a residue-class pattern set as an element list.
    Pattern {
        /// H0, T0, TPRIME, TDOUBLEPRIME or HPRIME.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        w: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sets obtained by deleting one element from a member.
    Shadow(Io),
    /// The family together with its shadow.
    Sigma(Io),
    /// The up-set generated by the family.
    Closure(Io),
    /// Apply every shift until the family is stable.
    Initial(Io),
    /// Inclusion-minimal members.
    Minimal(Io),
    /// The shift replacing `j` by `i` where possible.
    Shift {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Tails of the members meeting `[s]` exactly in `--set`.
    Trace {
        #[command(flatten)]
        io: Io,
        /// Comma-separated subset of `[s]`; empty for the empty set.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long)]
        s: u32,
    },
    /// Size, closure properties and intersection degrees.
    Stats {
        input: String,
        #[arg(long, value_enum, default_value = "table")]
        output_format: OutputFormat,
    },
    /// Whether `a` dominates `b` in the shifting order.
    Dominates {
        /// Comma-separated elements.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn read_family(input: &str) -> Res<SetFamily> {
    let mut text = String::new();
    if input == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
    }
    let name = if input == "-" { "<stdin>" } else { input };
    parse_family(&text).map_err(|e| match e {
        Error::Parse { line, msg } => format!("{name}:{line}: {msg}").into(),
        other => other.into(),
    })
}

fn parse_list(s: &str) -> Res<Vec<u32>> {
    let mut v = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        v.push(part.parse().map_err(|_| format!("bad element '{part}'"))?);
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn write_out(f: &SetFamily, out: Option<&Path>) -> Res<u8> {
    output::emit(&write_family(f), out)?;
    Ok(EXIT_OK)
}

fn transform(io: Io, op: impl FnOnce(&SetFamily) -> Result<SetFamily, Error>) -> Res<u8> {
    let f = read_family(&io.input)?;
    write_out(&op(&f)?, io.out.as_deref())
}

fn degree(f: &SetFamily, r: u32) -> String {
    f.intersection_degree(r).map(|t| t.to_string()).unwrap_or_else(|_| "undefined".into())
}

fn stats(f: &SetFamily, fmt: OutputFormat) -> String {
    let rows: Vec<(&str, String)> = vec![
        ("n", f.ground().get().to_string()),
        ("size", f.len().to_string()),
        ("upset", f.is_upset().to_string()),
        ("initial", f.is_initial().to_string()),
        ("nontrivial", f.is_nontrivial().to_string()),
        ("t2", degree(f, 2)),
        ("t3", degree(f, 3)),
    ];
    match fmt {
        OutputFormat::Json => {
            let t = |r| f.intersection_degree(r).ok();
            output::json(&json!({
                "n": f.ground().get(),
                "size": f.len(),
                "upset": f.is_upset(),
                "initial": f.is_initial(),
                "nontrivial": f.is_nontrivial(),
                "t2": t(2),
                "t3": t(3),
            }))
        }
        OutputFormat::Csv => {
            let header: Vec<&str> = rows.iter().map(|r| r.0).collect();
            output::csv(&header, &[rows.iter().map(|r| r.1.clone()).collect()])
        }
        OutputFormat::Table => output::table(&["stat", "value"], &rows.into_iter().map(|(k, v)| vec![k.into(), v]).collect::<Vec<_>>()),
    }
}

pub fn run(cmd: FamilyCmd) -> Res<u8> {
    match cmd {
        FamilyCmd::Construct { kind, n, r, t, out } => {
            let f = match kind {
                Kind::Star => star(n)?,
                Kind::BraceDaykin => brace_daykin_family(n, r)?,
                Kind::Katona => katona_style_family(n, t)?,
            };
            write_out(&f, out.as_deref())
        }
        FamilyCmd::Pattern { kind, w, n, out } => {
            let k = PatternKind::parse(&kind).ok_or_else(|| {
                let names: Vec<&str> = PatternKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown pattern '{kind}'; expected one of {}", names.join(", "))
            })?;
            let p = pattern_set(k, w, n)?;
            let elems: Vec<String> = p.render().iter().map(u32::to_string).collect();
            output::emit(&format!("{}\n", elems.join(",")), out.as_deref())?;
            Ok(EXIT_OK)
        }
        FamilyCmd::Shadow(io) => transform(io, |f| Ok(f.shadow())),
        FamilyCmd::Sigma(io) => transform(io, |f| Ok(f.sigma())),
        FamilyCmd::Closure(io) => transform(io, SetFamily::upset_closure),
        FamilyCmd::Initial(io) => transform(io, |f| Ok(f.make_initial())),
        FamilyCmd::Minimal(io) => transform(io, |f| Ok(f.minimal_members())),
        FamilyCmd::Shift { io, i, j } => transform(io, |f| f.shift(i, j)),
        FamilyCmd::Trace { io, set, s } => {
            let elems = parse_list(&set)?;
            transform(io, |f| {
                let s_set = ElementSet::from_elements(f.ground(), &elems)?;
                f.trace(&s_set, s)
            })
        }
        FamilyCmd::Stats { input, output_format } => {
            let f = read_family(&input)?;
            output::emit(&stats(&f, output_format), None)?;
            Ok(EXIT_OK)
        }
        FamilyCmd::Dominates { a, b } => {
            let (a, b) = (parse_list(&a)?, parse_list(&b)?);
            output::emit(&format!("{}\n", dominates_sorted(&a, &b)), None)?;
            Ok(EXIT_OK)
        }
    }
}
