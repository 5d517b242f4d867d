use std::collections::BTreeSet;

use setfam_core::search::{self, Checkpoint, RunOptions, SearchConstraints};
use setfam_core::{brace_daykin_family, Error, IntersectionProfile, SetFamily};

fn key(f: &SetFamily) -> Vec<u64> {
    let mut v = f.masks().to_vec();
    v.sort_unstable();
    v
}

fn prof(r: u32, t: u32) -> IntersectionProfile {
    IntersectionProfile::new(r, t).unwrap()
}

fn seq() -> RunOptions {
    RunOptions { threads: 1, ..Default::default() }
}

/// Every collection of subsets of `[n]`, filtered for closure under adding
/// one element.
fn brute_upsets(n: u32) -> BTreeSet<Vec<u64>> {
    let cells = 1usize << n;
    let mut out = BTreeSet::new();
    for coll in 0u64..1 << cells {
        let has = |m: usize| coll >> m & 1 == 1;
        let closed = (0..cells).all(|m| !has(m) || (0..n).all(|e| has(m | 1 << e)));
        if closed {
            out.insert((0..cells as u64).filter(|&m| has(m as usize)).collect());
        }
    }
    out
}

#[test]
fn upsets_match_brute_force() {
    for n in 1..=4 {
        let mut seen = BTreeSet::new();
        let count = search::enumerate_upsets(n, |f| {
            assert!(seen.insert(key(f)), "duplicate family at n = {n}");
        })
        .unwrap();
        assert_eq!(count as usize, seen.len());
        assert_eq!(seen, brute_upsets(n), "n = {n}");
    }
}

#[test]
fn initial_families_are_the_initial_upsets() {
    for n in 1..=5 {
        let mut filtered = BTreeSet::new();
        search::enumerate_upsets(n, |f| {
            if f.is_initial() {
                filtered.insert(key(f));
            }
        })
        .unwrap();
        let mut direct = BTreeSet::new();
        search::enumerate_initial(n, |f| {
            direct.insert(key(f));
        })
        .unwrap();
        assert_eq!(direct, filtered, "n = {n}");
    }
}

#[test]
fn pruning_agrees_with_exhaustive_search() {
    let sets: Vec<(Vec<IntersectionProfile>, bool)> = vec![
        (vec![], false),
        (vec![prof(2, 1)], false),
        (vec![prof(2, 2)], false),
        (vec![prof(3, 1)], false),
        (vec![prof(3, 1)], true),
        (vec![prof(2, 1)], true),
        (vec![prof(3, 1), prof(2, 3)], false),
        (vec![prof(3, 2)], true),
    ];
    for n in 1..=4 {
        for (profiles, nontrivial) in &sets {
            for initial in [false, true] {
                let c = SearchConstraints::new(n, profiles.clone(), *nontrivial, initial).unwrap();
                let pruned = search::search_max_with(&c, None, true, &seq()).unwrap();
                let full = search::search_max_with(&c, None, false, &seq()).unwrap();
                assert_eq!(pruned.max_size, full.max_size, "n = {n}, {profiles:?}, {nontrivial}, {initial}");
                if let Some(w) = &pruned.witness {
                    assert_eq!(Some(w.len() as u64), pruned.max_size);
                    assert!(w.is_upset());
                    assert!(profiles.iter().all(|&p| w.is_r_wise_t_intersecting(p)));
                    assert!(!nontrivial || w.is_nontrivial());
                }
            }
        }
    }
}

#[test]
fn shifting_never_grows_sigma() {
    for n in 1..=5 {
        search::enumerate_upsets(n, |f| {
            let g = f.make_initial();
            assert_eq!(g.len(), f.len());
            assert!(g.sigma().len() <= f.sigma().len(), "n = {n}, F = {:?}", f.masks());
        })
        .unwrap();
    }
}

#[test]
fn budgeted_runs_resume_to_the_same_result() {
    let task = search::conjecture9_task(6, false).unwrap();
    let whole = search::run(&task, &seq(), None).unwrap().result;
    assert!(whole.complete);

    let mut resume = None;
    let mut rounds = 0;
    let result = loop {
        let opts = RunOptions { threads: 1, budget: Some(7_000), ..Default::default() };
        let out = search::run(&task, &opts, resume.take()).unwrap();
        rounds += 1;
        if out.result.complete {
            break out.result;
        }
        // exercise the on-disk encoding each round
        let bytes = out.checkpoint.to_bytes();
        resume = Checkpoint::from_bytes(&bytes).unwrap();
    };
    assert!(rounds > 2);
    assert_eq!(result.to_json(false), whole.to_json(false));
}

#[test]
fn checkpoint_for_another_task_is_rejected() {
    let t9 = search::conjecture9_task(5, false).unwrap();
    let t3 = search::conjecture3_task(5, false).unwrap();
    let opts = RunOptions { threads: 1, budget: Some(50), ..Default::default() };
    let cp = search::run(&t9, &opts, None).unwrap().checkpoint;
    assert!(matches!(search::run(&t3, &seq(), Some(cp.clone())), Err(Error::Checkpoint(_))));
    let t9_6 = search::conjecture9_task(6, false).unwrap();
    assert!(matches!(search::run(&t9_6, &seq(), Some(cp)), Err(Error::Checkpoint(_))));
}

#[test]
fn worker_count_does_not_change_results() {
    let tasks = [
        search::conjecture9_task(6, false).unwrap(),
        search::conjecture3_task(5, false).unwrap(),
        search::eq2_task(5, 3, false).unwrap(),
        search::conjecture3_task(7, true).unwrap(),
    ];
    for task in &tasks {
        let runs: Vec<_> = [1, 4, 8]
            .iter()
            .map(|&threads| {
                let opts = RunOptions { threads, ..Default::default() };
                search::run(task, &opts, None).unwrap().result.to_json(false)
            })
            .collect();
        assert_eq!(runs[0], runs[1], "{}", task.label);
        assert_eq!(runs[0], runs[2], "{}", task.label);
    }
}

#[test]
fn nontrivial_3wise_maximum_is_brace_daykin() {
    let r = search::run(&search::eq2_task(5, 3, false).unwrap(), &seq(), None).unwrap().result;
    assert_eq!(r.max_size, Some(10));
    assert_eq!(r.counterexample_count, 0);
    let w = r.witness.unwrap();
    assert!(w.is_isomorphic(&brace_daykin_family(5, 3).unwrap()).unwrap());
}

#[test]
fn intersecting_maximum_is_half() {
    let r = search::run(&search::eq1_task(5, false).unwrap(), &seq(), None).unwrap().result;
    assert_eq!(r.max_size, Some(16));
    assert_eq!(r.counterexample_count, 0);
}
