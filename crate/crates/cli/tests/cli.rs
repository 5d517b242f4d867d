use std::io::Write;
use std::process::{Command, Output, Stdio};

fn setfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setfam")).args(args).env_remove("SETFAM_THREADS").output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_setfam"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = setfam(&["verify", "--claim", "eq9"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("verified"));

    let sharp = setfam(&["verify", "--claim", "eq10", "--multiplier", "47", "--output-format", "json"]);
    assert_eq!(code(&sharp), 1);
    assert_eq!(json(&sharp)[0]["status"], "refuted");

    let bogus = setfam(&["verify", "--claim", "bogus"]);
    assert_eq!(code(&bogus), 2);
    assert!(String::from_utf8_lossy(&bogus.stderr).contains("usage"));

    assert_eq!(code(&setfam(&["verify", "--claim", "eq9", "--no-such-flag"])), 2);
    assert_eq!(code(&setfam(&["verify"])), 2);
}

#[test]
fn skipped_claims_do_not_fail() {
    let o = setfam(&["verify", "--claim", "eq8", "--n", "5", "--output-format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)[0]["status"], "skipped_precondition");
}

#[test]
fn verify_csv_and_seed_forms() {
    let hex = setfam(&["verify", "--claim", "kleitman", "--instances", "200", "--seed", "0x10", "--output-format", "csv"]);
    let dec = setfam(&["verify", "--claim", "kleitman", "--instances", "200", "--seed", "16", "--output-format", "csv"]);
    assert_eq!(code(&hex), 0);
    assert_eq!(hex.stdout, dec.stdout);
    let text = stdout(&hex);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "claim,status,params,witness,details");
    assert!(lines.next().unwrap().starts_with("kleitman,verified,"));
}

#[test]
fn timings_only_when_requested() {
    let o = setfam(&["verify", "--claim", "eq8", "--output-format", "json"]);
    assert_eq!(json(&o)[0]["elapsed_ms"], 0);
}

#[test]
fn search_examples() {
    let eq2 = setfam(&["search", "--n", "5", "--conjecture", "eq2", "--output-format", "json"]);
    assert_eq!(code(&eq2), 0);
    assert_eq!(json(&eq2)["max_size"], 10);

    let c9 = setfam(&["search", "--n", "5", "--conjecture", "9", "--output-format", "json"]);
    assert_eq!(code(&c9), 0);
    assert_eq!(json(&c9)["counterexample_count"], 0);

    let over = setfam(&["search", "--n", "12", "--conjecture", "9"]);
    assert_eq!(code(&over), 2);
    assert_eq!(code(&setfam(&["search", "--n", "9", "--conjecture", "3", "--initial-only"])), 2);
    assert_eq!(code(&setfam(&["search", "--n", "5", "--conjecture", "7"])), 2);
}

#[test]
fn search_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("c9.ck");
    let cps = cp.to_str().unwrap();
    let base = ["search", "--n", "6", "--conjecture", "9", "--output-format", "json", "--checkpoint", cps];

    let whole = setfam(&["search", "--n", "6", "--conjecture", "9", "--output-format", "json"]);
    assert_eq!(code(&whole), 0);

    let mut args = base.to_vec();
    args.extend(["--budget", "20000"]);
    let mut last = None;
    for _ in 0..10 {
        let o = setfam(&args);
        match code(&o) {
            3 => assert!(cp.exists()),
            0 => {
                last = Some(o);
                break;
            }
            c => panic!("unexpected exit {c}"),
        }
    }
    let last = last.expect("search finished within ten rounds");
    assert_eq!(last.stdout, whole.stdout);

    // a checkpoint for a different search is refused
    let other = setfam(&["search", "--n", "6", "--conjecture", "3", "--checkpoint", cps]);
    assert_eq!(code(&other), 2);
}

#[test]
fn family_construct_and_stats() {
    let o = setfam(&["family", "construct", "star", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with("n=")).count(), 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t52.txt");
    let ps = path.to_str().unwrap();
    assert_eq!(code(&setfam(&["family", "construct", "katona", "--n", "5", "--t", "2", "--out", ps])), 0);
    let st = setfam(&["family", "stats", ps, "--output-format", "json"]);
    let v = json(&st);
    assert_eq!(v["t2"], 3);
    assert_eq!(v["t3"], 2);
    assert_eq!(v["upset"], true);
    assert_eq!(v["nontrivial"], false);
}

#[test]
fn family_transforms_on_stdin() {
    let sigma = with_stdin(&["family", "sigma", "-"], "n=3\n1,2,3\n");
    assert_eq!(code(&sigma), 0);
    assert_eq!(stdout(&sigma).lines().count(), 5);

    let shadow = with_stdin(&["family", "shadow", "-"], "n=3\n1,2\n2,3\n");
    assert_eq!(stdout(&shadow), "n=3\n1\n2\n3\n");

    let closure = with_stdin(&["family", "closure", "-"], "n=2\n1\n");
    assert_eq!(stdout(&closure), "n=2\n1\n1,2\n");

    let shift = with_stdin(&["family", "shift", "-", "--i", "1", "--j", "2"], "n=2\n2\n");
    assert_eq!(stdout(&shift), "n=2\n1\n");
}

#[test]
fn malformed_family_reports_line() {
    let o = with_stdin(&["family", "stats", "-"], "n=3\n1,2\n1,9\n");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}

#[test]
fn dominance_and_patterns() {
    assert_eq!(stdout(&setfam(&["family", "dominates", "--a", "1,3", "--b", "2,3"])), "true\n");
    assert_eq!(stdout(&setfam(&["family", "dominates", "--a", "2,3", "--b", "1,3"])), "false\n");
    let p = setfam(&["family", "pattern", "--kind", "H0", "--n", "12"]);
    assert_eq!(stdout(&p), "2,3,4,5,6,7,8,10,11\n");
    assert_eq!(code(&setfam(&["family", "pattern", "--kind", "nope", "--n", "12"])), 2);
}

#[test]
fn thread_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_setfam"))
        .args(["search", "--n", "5", "--conjecture", "3", "--output-format", "json"])
        .env("SETFAM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["max_size"], 6);
}
