use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde_json::Value;
use setfam_core::search::{self, Checkpoint, RunOptions, SearchResult};

use crate::output;
use crate::{OutputFormat, EXIT_INCOMPLETE, EXIT_OK, EXIT_REFUTED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Task {
    #[value(name = "3")]
    C3,
    #[value(name = "9")]
    C9,
    Eq1,
    Eq2,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum)]
    conjecture: Task,
    /// Intersection arity for `eq2`.
    #[arg(long, default_value_t = 3)]
    r: u32,
    /// Restrict to initial (shifted) up-sets.
    #[arg(long)]
    initial_only: bool,
    #[arg(long, env = "SETFAM_THREADS")]
    threads: Option<usize>,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Print one JSON progress line per second on stderr.
    #[arg(long)]
    progress: bool,
    /// Stop after this many node visits.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "table")]
    output_format: OutputFormat,
    #[arg(long)]
    timings: bool,
}

pub fn run(a: SearchArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let task = match a.conjecture {
        Task::C3 => search::conjecture3_task(a.n, a.initial_only)?,
        Task::C9 => search::conjecture9_task(a.n, a.initial_only)?,
        Task::Eq1 => search::eq1_task(a.n, a.initial_only)?,
        Task::Eq2 => search::eq2_task(a.n, a.r, a.initial_only)?,
    };
    let threads = crate::resolve_threads(a.threads);
    crate::install_pool(threads);

    let resume = match &a.checkpoint {
        Some(p) => Checkpoint::load(p)?,
        None => None,
    };
    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = stop.clone();
        // a second interrupt falls through to the default behaviour
        ctrlc::set_handler(move || {
            if stop.swap(true, Ordering::SeqCst) {
                std::process::exit(130);
            }
        })?;
    }
    let opts = RunOptions { threads, budget: a.budget, progress: a.progress, stop: Some(stop) };
    let outcome = search::run(&task, &opts, resume)?;
    if let Some(p) = &a.checkpoint {
        outcome.checkpoint.save(p)?;
    }
    let r = &outcome.result;
    output::emit(&render(r, a.output_format, a.timings), None)?;
    if !r.complete {
        match &a.checkpoint {
            Some(p) => eprintln!("search incomplete; progress saved to {}", p.display()),
            None => eprintln!("search incomplete; rerun with --checkpoint FILE to resume"),
        }
        return Ok(EXIT_INCOMPLETE);
    }
    Ok(if r.counterexample_count > 0 { EXIT_REFUTED } else { EXIT_OK })
}

fn sets_text(v: &Value) -> String {
    match v.get("sets").and_then(Value::as_array) {
        Some(sets) => {
            let inner: Vec<String> = sets
                .iter()
                .map(|s| {
                    let e: Vec<String> = s.as_array().into_iter().flatten().map(Value::to_string).collect();
                    format!("{{{}}}", e.join(","))
                })
                .collect();
            inner.join(" ")
        }
        None => "-".into(),
    }
}

fn rows(r: &SearchResult, timings: bool) -> Vec<Vec<String>> {
    let j = r.to_json(timings);
    let mut out = Vec::new();
    for key in ["label", "scope", "n", "complete", "families_visited", "feasible", "max_size"] {
        out.push(vec![key.to_string(), output::plain(&j[key])]);
    }
    out.push(vec!["witness".into(), sets_text(&j["witness"])]);
    out.push(vec!["counterexample_count".into(), r.counterexample_count.to_string()]);
    for (i, c) in j["counterexamples"].as_array().into_iter().flatten().enumerate() {
        out.push(vec![format!("counterexample[{i}]"), sets_text(c)]);
    }
    let ratio = r.min_ratio.map(|(s, f)| format!("{s}/{f}")).unwrap_or_else(|| "-".into());
    out.push(vec!["min_ratio".into(), ratio]);
    out.push(vec!["min_ratio_witness".into(), sets_text(&j["min_ratio_witness"])]);
    out.push(vec!["equality_witnesses".into(), r.equality_witnesses.to_string()]);
    if timings {
        out.push(vec!["elapsed_ms".into(), r.elapsed_ms.to_string()]);
    }
    for note in &r.notes {
        out.push(vec!["note".into(), note.clone()]);
    }
    out
}

fn render(r: &SearchResult, fmt: OutputFormat, timings: bool) -> String {
    match fmt {
        OutputFormat::Json => output::json(&r.to_json(timings)),
        OutputFormat::Csv => output::csv(&["key", "value"], &rows(r, timings)),
        OutputFormat::Table => output::table(&["key", "value"], &rows(r, timings)),
    }
}
