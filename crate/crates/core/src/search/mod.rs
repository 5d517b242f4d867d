//! Exhaustive search over up-sets and initial families of small ground sets.
//!
//! The DFS tree (see [`explore`]) is cut at depth two into independent
//! segments listed in pre-order. Each segment is scanned on its own and the
//! per-segment tallies are merged in segment order, so results do not depend
//! on the number of worker threads. A checkpoint stores the segment index,
//! the path of the next node to visit and the tallies so far.

mod bits;
mod checkpoint;
mod explore;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::family::{IntersectionProfile, SetFamily};
use crate::set::GroundSize;

use bits::{Bits, W4};
pub use checkpoint::Checkpoint;
pub use explore::LatticeOrder;
use explore::{Cursor, Frame, Lattice};

/// Largest ground size for enumerating all up-sets.
pub const MAX_FULL_N: u32 = 6;
/// Largest ground size for enumerating initial families.
pub const MAX_INITIAL_N: u32 = 8;
/// Counterexamples kept in a result; the total is still counted.
pub const MAX_KEPT_COUNTEREXAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConstraints {
    pub n: u32,
    pub profiles: Vec<IntersectionProfile>,
    pub require_nontrivial: bool,
    pub initial_only: bool,
}

impl SearchConstraints {
    pub fn new(n: u32, profiles: Vec<IntersectionProfile>, require_nontrivial: bool, initial_only: bool) -> Result<Self> {
        let c = SearchConstraints { n, profiles, require_nontrivial, initial_only };
        c.check_limits()?;
        Ok(c)
    }

    pub fn check_limits(&self) -> Result<()> {
        GroundSize::new(self.n)?;
        if self.initial_only {
            if self.n > MAX_INITIAL_N {
                return Err(Error::Limit(format!(
                    "initial-only enumeration supports n <= {MAX_INITIAL_N}, got {}",
                    self.n
                )));
            }
        } else if self.n > MAX_FULL_N {
            return Err(Error::Limit(format!(
                "enumerating all up-sets supports n <= {MAX_FULL_N}, got {}; use initial-only mode (n <= {MAX_INITIAL_N})",
                self.n
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> LatticeOrder {
        if self.initial_only {
            LatticeOrder::Shifting
        } else {
            LatticeOrder::Inclusion
        }
    }

    pub fn scope(&self) -> &'static str {
        if self.initial_only {
            "shifted subclass"
        } else {
            "all up-sets"
        }
    }
}

/// What a scan accumulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    /// Count feasible families.
    Count,
    /// Largest feasible family; sizes above `limit` are counterexamples.
    /// `prune` enables the branch-and-bound cut.
    MaxSize { prune: bool, limit: Option<u64> },
    /// `|σ(F)| / |F|` over non-empty feasible families; ratios below 2 are
    /// counterexamples.
    SigmaRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchTask {
    pub label: String,
    pub constraints: SearchConstraints,
    pub objective: Objective,
}

impl SearchTask {
    /// Stable 64-bit digest of the task parameters, stored in checkpoints.
    pub fn hash64(&self) -> u64 {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("task serialises");
        let d = Sha256::digest(&bytes);
        u64::from_le_bytes(d[..8].try_into().unwrap())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub visited: u64,
    pub feasible: u64,
    pub best: Option<(u64, Vec<u16>)>,
    pub counterexamples: Vec<Vec<u16>>,
    pub counterexample_count: u64,
    /// `(|σ(F)|, |F|, path)` with the smallest ratio seen.
    pub min_ratio: Option<(u64, u64, Vec<u16>)>,
    pub equality_count: u64,
}

impl Tally {
    /// Appends `later`, which follows `self` in pre-order.
    pub fn merge(&mut self, later: Tally) {
        self.visited += later.visited;
        self.feasible += later.feasible;
        if let Some((s, p)) = later.best {
            if self.best.as_ref().is_none_or(|(b, _)| s > *b) {
                self.best = Some((s, p));
            }
        }
        for c in later.counterexamples {
            if self.counterexamples.len() < MAX_KEPT_COUNTEREXAMPLES {
                self.counterexamples.push(c);
            }
        }
        self.counterexample_count += later.counterexample_count;
        if let Some((s, f, p)) = later.min_ratio {
            if self.min_ratio.as_ref().is_none_or(|(s0, f0, _)| s * f0 < s0 * f) {
                self.min_ratio = Some((s, f, p));
            }
        }
        self.equality_count += later.equality_count;
    }

    fn note_counterexample(&mut self, path: Vec<u16>) {
        self.counterexample_count += 1;
        if self.counterexamples.len() < MAX_KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(path);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub label: String,
    pub scope: String,
    pub n: u32,
    pub complete: bool,
    pub families_visited: u64,
    pub feasible: u64,
    pub max_size: Option<u64>,
    pub witness: Option<SetFamily>,
    pub counterexamples: Vec<SetFamily>,
    pub counterexample_count: u64,
    /// Smallest `|σ(F)| / |F|` as `(|σ(F)|, |F|)`.
    pub min_ratio: Option<(u64, u64)>,
    pub min_ratio_witness: Option<SetFamily>,
    pub equality_witnesses: u64,
    pub elapsed_ms: u64,
    pub notes: Vec<String>,
}

fn family_json(f: &SetFamily) -> serde_json::Value {
    json!({ "n": f.ground().get(), "sets": f.iter().map(|s| s.elements()).collect::<Vec<_>>() })
}

impl SearchResult {
    /// Deterministic JSON; `elapsed_ms` is included only when `timings`.
    pub fn to_json(&self, timings: bool) -> serde_json::Value {
        json!({
            "label": self.label,
            "scope": self.scope,
            "n": self.n,
            "complete": self.complete,
            "families_visited": self.families_visited,
            "feasible": self.feasible,
            "max_size": self.max_size,
            "witness": self.witness.as_ref().map(family_json),
            "counterexamples": self.counterexamples.iter().map(family_json).collect::<Vec<_>>(),
            "counterexample_count": self.counterexample_count,
            "min_ratio": self.min_ratio.map(|(s, f)| json!([s, f])),
            "min_ratio_witness": self.min_ratio_witness.as_ref().map(family_json),
            "equality_witnesses": self.equality_witnesses,
            "elapsed_ms": if timings { self.elapsed_ms } else { 0 },
            "notes": self.notes,
        })
    }
}

/// How a run is executed; none of these affect the result.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 means the rayon default.
    pub threads: usize,
    /// Stop after this many node visits in this invocation.
    pub budget: Option<u64>,
    /// Emit one JSON progress line per second on stderr.
    pub progress: bool,
    /// Raised externally to stop the run at the next node.
    pub stop: Option<Arc<AtomicBool>>,
}

/// Outcome of [`run`]: the result and, when incomplete, the resume state.
pub struct RunOutcome {
    pub result: SearchResult,
    pub checkpoint: Checkpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Segment {
    path: Vec<u16>,
    /// Visit only the node itself (its children are separate segments).
    single: bool,
}

struct Engine<B> {
    lat: Lattice<B>,
    task: SearchTask,
}

impl<B: Bits> Engine<B> {
    fn new(task: &SearchTask) -> Self {
        let c = &task.constraints;
        Engine { lat: Lattice::new(c.n, c.order(), c.profiles.clone()), task: task.clone() }
    }

    fn segments(&self) -> Vec<Segment> {
        let mut out = vec![Segment { path: vec![], single: true }];
        let mut members = Vec::new();
        let root = self.lat.root();
        let mut from = 0;
        while let Some(f1) = self.lat.first_child(&root, from, &mut members) {
            let g1 = f1.gen.unwrap();
            out.push(Segment { path: vec![g1 as u16], single: true });
            let mut from2 = g1 + 1;
            let mut m2 = members.clone();
            while let Some(f2) = self.lat.first_child(&f1, from2, &mut m2) {
                let g2 = f2.gen.unwrap();
                out.push(Segment { path: vec![g1 as u16, g2 as u16], single: false });
                from2 = g2 + 1;
            }
            from = g1 + 1;
        }
        out
    }

    fn nontrivial(&self, cur: &Cursor<B>) -> bool {
        let top = cur.top();
        top.family.count() > 0 && cur.members[..top.members_len].iter().fold(u64::MAX, |a, &m| a & m) == 0
    }

    /// Records the node under the cursor; returns whether to descend.
    fn visit(&self, cur: &Cursor<B>, tally: &mut Tally) -> bool {
        tally.visited += 1;
        let top: &Frame<B> = cur.top();
        let c = &self.task.constraints;
        let feasible = !c.require_nontrivial || self.nontrivial(cur);
        let size = top.family.count() as u64;
        if feasible {
            tally.feasible += 1;
            match self.task.objective {
                Objective::Count => {}
                Objective::MaxSize { limit, .. } => {
                    if tally.best.as_ref().is_none_or(|(b, _)| size > *b) {
                        tally.best = Some((size, cur.path()));
                    }
                    if limit.is_some_and(|l| size > l) {
                        tally.note_counterexample(cur.path());
                    }
                }
                Objective::SigmaRatio => {
                    if size > 0 {
                        let sigma = top.family.or(top.family.shadow(c.n)).count() as u64;
                        if sigma < 2 * size {
                            tally.note_counterexample(cur.path());
                        } else if sigma == 2 * size {
                            tally.equality_count += 1;
                        }
                        if tally.min_ratio.as_ref().is_none_or(|(s0, f0, _)| sigma * f0 < s0 * size) {
                            tally.min_ratio = Some((sigma, size, cur.path()));
                        }
                    }
                }
            }
        }
        if let Objective::MaxSize { prune: true, .. } = self.task.objective {
            if let Some((best, _)) = tally.best {
                let upper = self.lat.reachable(top).count() as u64;
                if upper <= best {
                    return false;
                }
            }
        }
        true
    }

    fn cursor_for(&self, seg: &Segment, path: &[u16]) -> Result<Cursor<B>> {
        Cursor::at(&self.lat, path, seg.path.len())
            .ok_or_else(|| Error::Checkpoint(format!("path {path:?} is not a node of this search")))
    }

    /// Scans one segment starting at `path`, stopping early when `budget`
    /// reaches zero or `stop` is raised. Returns the next unvisited path if
    /// stopped early.
    fn scan(
        &self,
        seg: &Segment,
        path: &[u16],
        tally: &mut Tally,
        budget: &mut Option<u64>,
        stop: Option<&AtomicBool>,
        counter: &AtomicU64,
    ) -> Result<Option<Vec<u16>>> {
        let mut cur = self.cursor_for(seg, path)?;
        let mut local = 0u64;
        loop {
            if budget.is_some_and(|b| b == 0) || stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
                counter.fetch_add(local, Ordering::Relaxed);
                return Ok(Some(cur.path()));
            }
            let descend = self.visit(&cur, tally);
            if let Some(b) = budget.as_mut() {
                *b -= 1;
            }
            local += 1;
            if local == 4096 {
                counter.fetch_add(local, Ordering::Relaxed);
                local = 0;
            }
            if seg.single || !cur.advance(&self.lat, descend) {
                counter.fetch_add(local, Ordering::Relaxed);
                return Ok(None);
            }
        }
    }

    fn finish(&self, total: &Tally, complete: bool, elapsed: Duration) -> SearchResult {
        let c = &self.task.constraints;
        let fam = |p: &Vec<u16>| self.lat.family_of_path(p);
        let mut notes = Vec::new();
        if c.initial_only {
            notes.push("scan restricted to initial (shifted) families".to_string());
            if c.require_nontrivial {
                notes.push(
                    "shifting can destroy non-triviality: this is not a verification over all non-trivial families"
                        .to_string(),
                );
            }
            if self.task.objective == Objective::SigmaRatio {
                notes.push(
                    "reduction to initial families for |σ(F)| is checked empirically for n <= 5, not proved".to_string(),
                );
            }
        }
        SearchResult {
            label: self.task.label.clone(),
            scope: c.scope().to_string(),
            n: c.n,
            complete,
            families_visited: total.visited,
            feasible: total.feasible,
            max_size: total.best.as_ref().map(|b| b.0),
            witness: total.best.as_ref().map(|b| fam(&b.1)),
            counterexamples: total.counterexamples.iter().map(fam).collect(),
            counterexample_count: total.counterexample_count,
            min_ratio: total.min_ratio.as_ref().map(|r| (r.0, r.1)),
            min_ratio_witness: total.min_ratio.as_ref().map(|r| fam(&r.2)),
            equality_witnesses: total.equality_count,
            elapsed_ms: elapsed.as_millis() as u64,
            notes,
        }
    }

    fn run(&self, opts: &RunOptions, resume: Option<Checkpoint>) -> Result<RunOutcome> {
        let start = Instant::now();
        let segments = self.segments();
        let hash = self.task.hash64();
        let counter = AtomicU64::new(0);
        let done = AtomicBool::new(false);

        let mut state = match resume {
            Some(cp) => {
                cp.validate(self.task.constraints.n, hash)?;
                if cp.segment > segments.len() {
                    return Err(Error::Checkpoint("segment index out of range".into()));
                }
                cp
            }
            None => Checkpoint::fresh(self.task.constraints.n, hash),
        };
        counter.store(state.total.visited + state.partial.visited, Ordering::Relaxed);

        let stop = opts.stop.as_deref();
        let work = |state: &mut Checkpoint| -> Result<()> {
            let mut budget = opts.budget;
            // finish a partially scanned segment, then continue segment-wise
            while state.segment < segments.len() && (budget.is_some() || !state.path.is_empty()) {
                let seg = &segments[state.segment];
                let path = if state.path.is_empty() { seg.path.clone() } else { state.path.clone() };
                match self.scan(seg, &path, &mut state.partial, &mut budget, stop, &counter)? {
                    Some(next) => {
                        state.path = next;
                        return Ok(());
                    }
                    None => {
                        let part = std::mem::take(&mut state.partial);
                        state.total.merge(part);
                        state.segment += 1;
                        state.path.clear();
                    }
                }
            }
            if state.segment >= segments.len() {
                return Ok(());
            }
            use rayon::prelude::*;
            let rest = &segments[state.segment..];
            // a stopped segment yields None and everything from it on is redone
            let scan_all = || {
                rest.par_iter()
                    .map(|seg| {
                        let mut t = Tally::default();
                        self.scan(seg, &seg.path, &mut t, &mut None, stop, &counter)
                            .map(|left| left.is_none().then_some(t))
                    })
                    .collect::<Result<Vec<Option<Tally>>>>()
            };
            let tallies = if opts.threads > 0 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.threads)
                    .build()
                    .map_err(|e| Error::Argument(e.to_string()))?
                    .install(scan_all)?
            } else {
                scan_all()?
            };
            for t in tallies {
                match t {
                    Some(t) => {
                        state.total.merge(t);
                        state.segment += 1;
                    }
                    None => break,
                }
            }
            Ok(())
        };

        let res = std::thread::scope(|s| {
            if opts.progress {
                let total_segments = segments.len();
                let (counter, done) = (&counter, &done);
                s.spawn(move || {
                    let t0 = Instant::now();
                    while !done.load(Ordering::Relaxed) {
                        for _ in 0..10 {
                            std::thread::sleep(Duration::from_millis(100));
                            if done.load(Ordering::Relaxed) {
                                return;
                            }
                        }
                        eprintln!(
                            "{}",
                            json!({
                                "visited": counter.load(Ordering::Relaxed),
                                "segments": total_segments,
                                "elapsed_ms": t0.elapsed().as_millis() as u64,
                            })
                        );
                    }
                });
            }
            let r = work(&mut state);
            done.store(true, Ordering::Relaxed);
            r
        });
        res?;

        let complete = state.segment >= segments.len();
        let mut shown = state.total.clone();
        if !complete {
            shown.merge(state.partial.clone());
        }
        state.complete = complete;
        let result = self.finish(&shown, complete, start.elapsed());
        Ok(RunOutcome { result, checkpoint: state })
    }

    fn for_each(&self, mut visitor: impl FnMut(&SetFamily)) -> u64 {
        let mut cur = Cursor::at(&self.lat, &[], 0).expect("root");
        let mut count = 0;
        loop {
            count += 1;
            visitor(&self.lat.to_family(&cur.top().family));
            if !cur.advance(&self.lat, true) {
                return count;
            }
        }
    }
}

/// Runs a search task, optionally resuming from a checkpoint.
pub fn run(task: &SearchTask, opts: &RunOptions, resume: Option<Checkpoint>) -> Result<RunOutcome> {
    task.constraints.check_limits()?;
    if task.constraints.n <= 6 {
        Engine::<u64>::new(task).run(opts, resume)
    } else {
        Engine::<W4>::new(task).run(opts, resume)
    }
}

fn run_complete(task: &SearchTask, opts: &RunOptions) -> Result<SearchResult> {
    Ok(run(task, opts, None)?.result)
}

/// Visits every up-set of `2^[n]` (including the empty family and the power
/// set) exactly once; returns the count. Requires `n <= 6`.
pub fn enumerate_upsets(n: u32, visitor: impl FnMut(&SetFamily)) -> Result<u64> {
    let c = SearchConstraints::new(n, vec![], false, false)?;
    let task = SearchTask { label: "upsets".into(), constraints: c, objective: Objective::Count };
    Ok(Engine::<u64>::new(&task).for_each(visitor))
}

/// Visits every initial family of `2^[n]` exactly once. Requires `n <= 8`.
pub fn enumerate_initial(n: u32, visitor: impl FnMut(&SetFamily)) -> Result<u64> {
    let c = SearchConstraints::new(n, vec![], false, true)?;
    let task = SearchTask { label: "initial".into(), constraints: c, objective: Objective::Count };
    Ok(if n <= 6 { Engine::<u64>::new(&task).for_each(visitor) } else { Engine::<W4>::new(&task).for_each(visitor) })
}

/// Number of feasible families without materialising them.
pub fn count_families(constraints: &SearchConstraints, opts: &RunOptions) -> Result<u64> {
    let task = SearchTask { label: "count".into(), constraints: constraints.clone(), objective: Objective::Count };
    Ok(run_complete(&task, opts)?.feasible)
}

/// Largest family meeting the constraints, with branch-and-bound pruning.
pub fn search_max(constraints: &SearchConstraints, opts: &RunOptions) -> Result<SearchResult> {
    search_max_with(constraints, None, true, opts)
}

pub fn search_max_with(
    constraints: &SearchConstraints,
    limit: Option<u64>,
    prune: bool,
    opts: &RunOptions,
) -> Result<SearchResult> {
    let task = SearchTask {
        label: "max".into(),
        constraints: constraints.clone(),
        objective: Objective::MaxSize { prune, limit },
    };
    run_complete(&task, opts)
}

fn profile(r: u32, t: u32) -> IntersectionProfile {
    IntersectionProfile::new(r, t).expect("r >= 2")
}

/// 3-wise intersecting families with `|σ(F)| < 2|F|` are counterexamples.
pub fn conjecture9_task(n: u32, initial_only: bool) -> Result<SearchTask> {
    Ok(SearchTask {
        label: "conjecture9".into(),
        constraints: SearchConstraints::new(n, vec![profile(3, 1)], false, initial_only)?,
        objective: Objective::SigmaRatio,
    })
}

/// 3-wise 1- and 2-wise 3-intersecting families larger than `2^{n-2}` are
/// counterexamples.
pub fn conjecture3_task(n: u32, initial_only: bool) -> Result<SearchTask> {
    let limit = if n >= 2 { 1u64 << (n - 2) } else { 0 };
    Ok(SearchTask {
        label: "conjecture3".into(),
        constraints: SearchConstraints::new(n, vec![profile(3, 1), profile(2, 3)], false, initial_only)?,
        objective: Objective::MaxSize { prune: false, limit: Some(limit) },
    })
}

/// Intersecting families larger than `2^{n-1}`.
pub fn eq1_task(n: u32, initial_only: bool) -> Result<SearchTask> {
    Ok(SearchTask {
        label: "eq1".into(),
        constraints: SearchConstraints::new(n, vec![profile(2, 1)], false, initial_only)?,
        objective: Objective::MaxSize { prune: true, limit: Some(1u64 << (n - 1)) },
    })
}

/// Non-trivial `r`-wise intersecting families larger than
/// `(r + 2) 2^{n-1-r}`; needs `n >= r + 1`.
pub fn eq2_task(n: u32, r: u32, initial_only: bool) -> Result<SearchTask> {
    if r < 2 || n < r + 1 {
        return Err(Error::Argument(format!("the non-trivial r-wise bound needs r >= 2 and n >= r + 1 (n = {n}, r = {r})")));
    }
    Ok(SearchTask {
        label: "eq2".into(),
        constraints: SearchConstraints::new(n, vec![profile(r, 1)], true, initial_only)?,
        objective: Objective::MaxSize { prune: true, limit: Some((r as u64 + 2) << (n - 1 - r)) },
    })
}

pub fn check_conjecture9(n: u32, initial_only: bool, opts: &RunOptions) -> Result<SearchResult> {
    run_complete(&conjecture9_task(n, initial_only)?, opts)
}

pub fn check_conjecture3(n: u32, initial_only: bool, opts: &RunOptions) -> Result<SearchResult> {
    run_complete(&conjecture3_task(n, initial_only)?, opts)
}
