use clap::{ArgGroup, Args};
use serde_json::Value;
use setfam_core::verify::{self, ClaimParams, ClaimReport, Status, DEFAULT_INSTANCES};

use crate::output;
use crate::{OutputFormat, EXIT_OK, EXIT_REFUTED, EXIT_USAGE};

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("selector").required(true).args(["claim", "all"])))]
pub struct VerifyArgs {
    /// Claim identifier, or `all`.
    #[arg(long)]
    claim: Option<String>,
    /// Run every claim.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    multiplier: Option<u64>,
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    threshold: Option<u64>,
    #[arg(long)]
    divisor: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// Seed for the randomized suites; decimal or 0x-prefixed hex.
    #[arg(long, default_value = "0xF11", value_parser = parse_seed)]
    seed: u64,
    /// Random instances per randomized suite.
    #[arg(long, default_value_t = DEFAULT_INSTANCES)]
    instances: usize,
    #[arg(long, env = "SETFAM_THREADS")]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    output_format: OutputFormat,
    /// Include wall-clock times in the output.
    #[arg(long)]
    timings: bool,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed '{s}': {e}"))
}

pub fn run(a: VerifyArgs) -> Result<u8, Box<dyn std::error::Error>> {
    crate::install_pool(crate::resolve_threads(a.threads));
    let p = ClaimParams {
        multiplier: a.multiplier,
        w: a.w,
        threshold: a.threshold,
        divisor: a.divisor,
        n: a.n,
        m: a.m,
        seed: a.seed,
        instances: a.instances,
    };
    let all = a.all || a.claim.as_deref() == Some("all");
    let reports = if all {
        verify::run_all(&p)?
    } else {
        match verify::run_claim(a.claim.as_deref().unwrap_or_default(), &p) {
            Ok(r) => vec![r],
            Err(e) => {
                eprintln!("error: {e}");
                eprintln!("usage: setfam verify --claim <ID>|--all [options]");
                return Ok(EXIT_USAGE);
            }
        }
    };
    output::emit(&render(&reports, a.output_format, a.timings), None)?;
    Ok(if reports.iter().any(ClaimReport::is_refuted) { EXIT_REFUTED } else { EXIT_OK })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::Refuted => "refuted",
        Status::SkippedPrecondition => "skipped_precondition",
    }
}

fn render(reports: &[ClaimReport], fmt: OutputFormat, timings: bool) -> String {
    match fmt {
        OutputFormat::Json => {
            output::json(&Value::Array(reports.iter().map(|r| r.to_json(timings)).collect()))
        }
        OutputFormat::Csv => {
            let mut header = vec!["claim", "status", "params", "witness", "details"];
            if timings {
                header.push("elapsed_ms");
            }
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![
                        r.claim.clone(),
                        status_name(r.status).into(),
                        serde_json::to_string(&r.params).expect("json"),
                        r.witness.as_ref().map(Value::to_string).unwrap_or_default(),
                        r.details.clone(),
                    ];
                    if timings {
                        row.push(r.elapsed_ms.to_string());
                    }
                    row
                })
                .collect();
            output::csv(&header, &rows)
        }
        OutputFormat::Table => {
            let mut header = vec!["claim", "status"];
            if timings {
                header.push("ms");
            }
            header.push("details");
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![r.claim.clone(), status_name(r.status).into()];
                    if timings {
                        row.push(r.elapsed_ms.to_string());
                    }
                    row.push(r.details.clone());
                    row
                })
                .collect();
            let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
            output::table(&header, &rows)
                + &format!(
                    "\n{} claims: {} verified, {} refuted, {} skipped\n",
                    reports.len(),
                    count(Status::Verified),
                    count(Status::Refuted),
                    count(Status::SkippedPrecondition)
                )
        }
    }
}
