use std::io::{BufRead, BufReader};
use std::process::{Command, Output, Stdio};
use std::time::Duration;

use merit_core::{decode_hex, merit_factor};
use serde_json::Value;

fn merit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_merit"))
        .args(args)
        .env_remove("MERIT_WORKERS")
        .env_remove("MERIT_TIME_LIMIT")
        .output()
        .unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

fn one(args: &[&str]) -> Value {
    let out = merit(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = records(&out);
    assert_eq!(r.len(), 1);
    r.pop().unwrap()
}

/// Every printed hex re-decodes to a sequence with exactly the printed MF.
fn check_hex(rec: &Value, n: usize) {
    let seq = decode_hex(rec["hex"].as_str().unwrap(), n).unwrap();
    let mf = merit_factor(&seq).unwrap();
    assert_eq!(
        rec["mf_exact"],
        format!("{}/{}", mf.numerator, mf.denominator)
    );
    assert_eq!(rec["mf"].as_f64().unwrap(), mf.value());
}

#[test]
fn eval_examples() {
    let r = one(&["eval", "--hex", "b", "--n", "4"]);
    assert_eq!(r["energy"], 2);
    assert_eq!(r["mf"], 4.0);
    check_hex(&r, 4);

    let r = one(&["eval", "+++++--++-+-+", "--sidelobes"]);
    assert_eq!(r["mf_exact"], "169/12");
    assert_eq!(r["class"], "skew-symmetric");
    assert_eq!(r["sidelobes"].as_array().unwrap().len(), 12);
    check_hex(&r, 13);

    let r = one(&["eval", "-1 -1 1"]);
    assert_eq!(r["n"], 3);

    let bad = merit(&["eval", "++x"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position 2"));
}

#[test]
fn exhaustive_examples() {
    let r = one(&["exhaustive", "--n", "11"]);
    assert_eq!(r["mf"], 12.1);
    check_hex(&r, 11);
    let r = one(&["exhaustive", "--n", "13"]);
    assert_eq!(r["mf_exact"], "169/12");
    let r = one(&["exhaustive", "--n", "13", "--skew-only"]);
    assert_eq!(r["mf_exact"], "169/12");
    let refused = merit(&["exhaustive", "--n", "25"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(!refused.stderr.is_empty());
}

#[test]
fn potentials_examples() {
    let r = one(&[
        "potentials",
        "--k",
        "39",
        "--parts",
        "4",
        "--objective",
        "U",
    ]);
    assert_eq!(
        (r["partition"].as_str(), r["value"].as_i64()),
        (Some("18,11,6,4"), Some(3731))
    );
    let r = one(&[
        "potentials",
        "--k",
        "41",
        "--parts",
        "6",
        "--objective",
        "Ustar",
    ]);
    assert_eq!(
        (r["partition"].as_str(), r["value"].as_i64()),
        (Some("17,9,6,4,3,2"), Some(813))
    );
    assert_eq!(
        merit(&["potentials", "--k", "2", "--parts", "5"])
            .status
            .code(),
        Some(3)
    );

    let out = merit(&["potentials", "--k", "6", "--parts", "2", "--table"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    assert_eq!(
        recs.iter().filter(|r| r["record"] == "partition").count(),
        3
    );
}

#[test]
fn verify_exit_codes() {
    let out = merit(&["verify", "--dataset", "/no/such/file.psv"]);
    assert_eq!(out.status.code(), Some(4));

    let out = merit(&["verify", "--rows", "193,196"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    // n = 193 appears twice in the tables
    assert_eq!(recs.len(), 4);
    assert!(recs[..3].iter().all(|r| r["matched"] == true));
    assert_eq!(recs[3]["record"], "summary");
    assert_eq!(recs[3]["total"], 3);

    let out = merit(&["verify", "--rows", "2"]);
    assert_eq!(out.status.code(), Some(3));

    // whole bundled table: exit status follows the failure budget
    let out = merit(&["verify"]);
    let recs = records(&out);
    let summary = recs.last().unwrap();
    let within = summary["within_budget"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if within { 0 } else { 1 }));
    assert_eq!(summary["total"], 336);
}

#[test]
fn search_example_and_usage_errors() {
    let out = merit(&[
        "search",
        "--n",
        "21",
        "--partition",
        "1,1,2,2",
        "--seed",
        "7",
        "--to",
        "5",
        "--ti",
        "1000",
    ]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(recs[0]["record"], "start");
    assert_eq!(recs[0]["config"]["seed"], 7);
    assert!(recs[0]["rng"].as_str().unwrap().contains("ChaCha8"));
    let end = recs.last().unwrap();
    assert_eq!(end["record"], "end");
    assert_eq!(end["termination"], "outer-threshold");
    let best: Vec<_> = recs.iter().filter(|r| r["record"] == "best").collect();
    assert_eq!(best.len(), 3);
    for r in recs
        .iter()
        .filter(|r| r["record"] == "best" || r["record"] == "improvement")
    {
        check_hex(r, r["length"].as_u64().unwrap() as usize);
        assert!(r["elapsed_ms"].is_u64());
    }
    let target = best.iter().find(|r| r["slot"] == "target").unwrap();
    assert!(target["mf"].as_f64().unwrap() >= 3.0);

    for args in [
        &["search", "--n", "21"][..],
        &["search", "--n", "20", "--partition", "1,1,2,2"],
        &["search", "--n", "21", "--partition", "1,x"],
        &[
            "search",
            "--n",
            "21",
            "--partition",
            "1",
            "--policy",
            "greedy",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(merit(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn environment_overrides_and_flags_win() {
    let run = |env_workers: &str, extra: &[&str]| {
        let mut args = vec![
            "search",
            "--n",
            "15",
            "--partition",
            "2",
            "--to",
            "2",
            "--ti",
            "50",
        ];
        args.extend(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_merit"))
            .args(&args)
            .env("MERIT_WORKERS", env_workers)
            .env("MERIT_TIME_LIMIT", "30s")
            .output()
            .unwrap();
        assert!(out.status.success());
        let recs = records(&out);
        (
            recs[0]["config"]["workers"].as_u64().unwrap(),
            recs[0]["config"]["time_limit"].clone(),
        )
    };
    let (w, t) = run("3", &[]);
    assert_eq!(w, 3);
    assert_eq!(t["secs"], 30);
    let (w, _) = run("3", &["--workers", "1"]);
    assert_eq!(w, 1);
}

#[test]
fn interrupt_flushes_best_and_exits_130() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_merit"))
        .args([
            "search",
            "--n",
            "201",
            "--partition",
            "10,5,3",
            "--to",
            "1000000",
        ])
        .env_remove("MERIT_WORKERS")
        .env_remove("MERIT_TIME_LIMIT")
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    let first = lines.next().unwrap().unwrap();
    assert!(first.contains("\"start\""));
    std::thread::sleep(Duration::from_millis(300));
    let status = Command::new("kill")
        .args(["-INT", &child.id().to_string()])
        .status()
        .unwrap();
    assert!(status.success());
    let rest: Vec<Value> = lines
        .map(|l| serde_json::from_str(&l.unwrap()).unwrap())
        .collect();
    let code = child.wait().unwrap().code();
    assert_eq!(code, Some(130));
    let end = rest.last().unwrap();
    assert_eq!(end["record"], "end");
    assert_eq!(end["termination"], "stopped");
    assert!(rest
        .iter()
        .any(|r| r["record"] == "best" && r["slot"] == "target"));
}
