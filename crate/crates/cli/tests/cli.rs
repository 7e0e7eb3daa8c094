use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadturan"))
        .args(args)
        .output()
        .expect("spawn quadturan")
}

fn run_env(args: &[&str], key: &str, val: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadturan"))
        .args(args)
        .env(key, val)
        .output()
        .expect("spawn quadturan")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn clique_small_modulus() {
    let out = run(&["clique", "--k", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["size"], 2);
    assert_eq!(v["exact"], true);
}

#[test]
fn exact_three_by_three() {
    let out = run(&["exact", "--n", "3", "--m", "3", "--profiles", "2,2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["size"], 9);
    assert_eq!(v["exact"], true);
}

#[test]
fn construct_is_reproducible_and_optimize_does_not_grow() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let base = [
        "construct",
        "--n",
        "6",
        "--m",
        "6",
        "--k",
        "3",
        "--seed",
        "7",
    ];
    let mut outs = Vec::new();
    for dir in [&a, &b] {
        let mut args = base.to_vec();
        args.extend(["--out", dir.path().to_str().unwrap()]);
        let out = run(&args);
        assert_eq!(code(&out), 0);
        outs.push(json(&out));
    }
    for f in ["matrix.json", "quads.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    assert_eq!(outs[0]["size"], outs[1]["size"]);

    let mut args = base.to_vec();
    args.extend(["--optimize", "--out", c.path().to_str().unwrap()]);
    let opt = run(&args);
    assert_eq!(code(&opt), 0);
    let opt = json(&opt);
    assert!(opt["size"].as_u64().unwrap() <= opt["start_size"].as_u64().unwrap());
    assert_eq!(opt["start_size"], outs[0]["size"]);

    let quads = c.path().join("quads.json");
    let check = run(&[
        "verify",
        "--quads",
        quads.to_str().unwrap(),
        "--family",
        "k2:3",
    ]);
    assert_eq!(
        code(&check),
        0,
        "{}",
        String::from_utf8_lossy(&check.stdout)
    );
    assert_eq!(json(&check)["pass"], true);
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "construct",
        "--n",
        "7",
        "--m",
        "7",
        "--k",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let quads = dir.path().join("quads.json");
    let check = run(&[
        "verify",
        "--quads",
        quads.to_str().unwrap(),
        "--family",
        "k2:4",
    ]);
    assert_eq!(code(&check), 0);
    let v = json(&check);
    assert_eq!(v["pass"], true);
}

#[test]
fn empty_system_fails_with_first_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"n": 4, "m": 4, "quads": []}"#).unwrap();
    let out = run(&[
        "verify",
        "--quads",
        path.to_str().unwrap(),
        "--profiles",
        "2,2",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    let w = &v["outcomes"][0]["witness"];
    assert_eq!(w["a"], serde_json::json!([0, 1]));
    assert_eq!(w["b"], serde_json::json!([0, 1]));
}

#[test]
fn invalid_configuration_exits_two_with_empty_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["exact", "--n", "3", "--m", "3", "--profiles", "4,2"],
        vec!["exact", "--n", "9", "--m", "9", "--profiles", "2,2"],
        vec!["exact", "--n", "3", "--m", "3"],
        vec!["bounds", "--n", "5", "--m", "5", "--family", "k3:3"],
        vec!["bounds", "--n", "5", "--m", "5", "--family", "k7:3"],
        vec![
            "verify",
            "--quads",
            missing.to_str().unwrap(),
            "--profiles",
            "2,2",
        ],
        vec!["clique", "--k", "1"],
        vec!["clique", "--k", "9"],
        vec!["caen", "--n", "2", "--m", "2"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_exhaustion_exits_three_with_partial_result() {
    let out = run(&["clique", "--k", "15", "--budget-nodes", "5"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["exact"], false);
    assert!(v["size"].as_u64().unwrap() >= 3);

    let out = run(&[
        "exact",
        "--n",
        "5",
        "--m",
        "6",
        "--profiles",
        "2,3;3,2",
        "--budget-nodes",
        "1",
    ]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["exact"], false);
    assert!(!v["system"]["quads"].as_array().unwrap().is_empty());
}

#[test]
fn long_running_clique_checkpoints_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "clique",
        "--k",
        "9",
        "--long-running",
        "--budget-nodes",
        "300",
    ];
    let first = run_env(&args, "QUADTURAN_CHECKPOINT_DIR", dir.path());
    assert_eq!(code(&first), 3);
    let ck = dir.path().join("clique-k9.json");
    assert!(ck.exists());

    let second = run_env(
        &["clique", "--k", "9", "--long-running"],
        "QUADTURAN_CHECKPOINT_DIR",
        dir.path(),
    );
    assert_eq!(code(&second), 0);
    let v = json(&second);
    assert_eq!(v["size"], 3);
    assert_eq!(v["exact"], true);
    assert!(v["resumed_from"].as_u64().unwrap() > 0);
    assert_eq!(v["checkpoint"], ck.display().to_string());
}

#[test]
fn bench_csv_header() {
    let out = run(&["bench", "--suite", "lemmas", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "schema_version,suite,instance,result,wall_ms,workers"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.contains("failures=0")));
}

#[test]
fn worker_count_does_not_change_results() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    for args in [
        vec!["clique", "--k", "7"],
        vec!["caen", "--n", "6", "--m", "5", "--seed", "3"],
        vec!["bounds", "--n", "4", "--m", "5", "--family", "k2:3"],
    ] {
        let mut one = vec!["--workers", "1"];
        one.extend(&args);
        let mut four = vec!["--workers", "4"];
        four.extend(&args);
        let (a, b) = (run(&one), run(&four));
        assert_eq!(code(&a), code(&b), "{args:?}");
        assert_eq!(strip(json(&a)), strip(json(&b)), "{args:?}");
    }
}

#[test]
fn csv_output_quotes_profile_lists() {
    let out = run(&[
        "--format",
        "csv",
        "exact",
        "--n",
        "3",
        "--m",
        "3",
        "--profiles",
        "2,2",
    ]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let at = headers.iter().position(|h| h == "profiles").unwrap();
    assert_eq!(&row[at], "2,2");
    let at = headers.iter().position(|h| h == "size").unwrap();
    assert_eq!(&row[at], "9");
}

#[test]
fn triangles_of_three() {
    let out = run(&["triangles", "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["triangles"], 81);
}
