use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snarkdes")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_all_shipped() {
    let designs = data().join("designs");
    let out = run(&["verify-all", path(&designs)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "342 records verified\n");

    let single = run(&["verify-all", path(&designs), "--jobs", "1"]);
    assert_eq!(stdout(&single), stdout(&out));
}

#[test]
fn verify_all_machine_summary() {
    let out = run(&["verify-all", path(&data().join("designs/k64")), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], 38);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 38);
    assert_eq!(v["reports"][0]["blocks"], 56);
}

#[test]
fn spectrum_output() {
    let out = run(&["spectrum", "--v", "24", "--e", "36", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "mod 72: 1, 64\n");
    let bad = run(&["spectrum", "--v", "24", "--e", "35", "--d", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tampered_design_fails_with_violations() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data().join("designs/k73/g01.design")).unwrap();
    let tampered = dir.path().join("tampered.design");
    std::fs::write(&tampered, text.replacen(" 70 ", " 69 ", 1)).unwrap();

    let out = run(&["verify", path(&tampered)]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("covered 2 times"));
    assert!(text.contains("covered 0 times"));

    let all = run(&["verify-all", path(dir.path())]);
    assert_eq!(all.status.code(), Some(1));
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(run(&["verify", "/definitely/not/here.design"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "/definitely/not/here"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.design");
    std::fs::write(&junk, "design x\nsnark G99\n").unwrap();
    assert_eq!(run(&["verify", path(&junk)]).status.code(), Some(2));
}

#[test]
fn search_requires_seed() {
    let out = run(&["search", "--snark", "G1", "--host", "k12x3", "--plan", "(0,36,3)", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_rejects_unbalanced_plan() {
    let out =
        run(&["search", "--snark", "G1", "--host", "k12x3", "--plan", "(0,36,1)", "--budget", "10", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("found.design");
    let out = run(&[
        "search",
        "--snark",
        "G1",
        "--host",
        "k12x3",
        "--plan",
        "(0,36,3)",
        "--seed",
        "1",
        "--budget",
        "2000000",
        "--jobs",
        "1",
        "--emit",
        path(&emitted),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let check = run(&["verify", path(&emitted)]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn search_is_reproducible_with_one_job() {
    let dir = tempfile::tempdir().unwrap();
    let emit = |name: &str| {
        let p = dir.path().join(name);
        let out = run(&[
            "search",
            "--snark",
            "G2",
            "--host",
            "k12x3",
            "--plan",
            "(0,36,3)",
            "--seed",
            "9",
            "--budget",
            "3000",
            "--jobs",
            "1",
            "--emit",
            path(&p),
        ]);
        (out.status.code(), std::fs::read_to_string(p).unwrap())
    };
    let (code, first) = emit("a.design");
    assert_eq!(code, Some(1));
    assert!(first.starts_with("# best candidate, cost "));
    assert_eq!(emit("b.design").1, first);
}

#[test]
fn search_resumes_from_init() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("k136.design");
    let out = run(&[
        "search",
        "--init",
        path(&data().join("designs/k136/g03.design")),
        "--seed",
        "0",
        "--budget",
        "10",
        "--emit",
        path(&emitted),
        "--format",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["report"]["blocks"], 255);
    assert_eq!(run(&["verify", path(&emitted)]).status.code(), Some(0));
}

#[test]
fn catalog_check_passes() {
    let out = run(&["catalog", "check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("catalog PASS: 38 graphs, 703 pairs non-isomorphic\n"));
    let machine = run(&["catalog", "check", "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&machine)).unwrap();
    assert_eq!(v["pairs_checked"], 703);
}

#[test]
fn report_ledger() {
    let out = run(&["report", path(&data().join("designs"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("spectrum (24, 36, 3): mod 72: 1, 64"));
    assert_eq!(text.lines().filter(|l| l.starts_with('G')).count(), 38);

    // a directory with one snark's designs only
    let partial = run(&["report", path(&data().join("designs/k73")), "--format", "machine"]);
    assert_eq!(partial.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&partial)).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["rows"][0]["slots"]["K73"]["Verified"]["record"], "g01-k73");
}
