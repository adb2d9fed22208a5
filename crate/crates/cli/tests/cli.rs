use std::path::Path;
use std::process::{Command, Output};

fn pshodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pshodge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const MUMFORD: &str = "(2*lambda2 - lambda1^2)*psi1^2";

#[test]
fn mumford_failure_at_genus_two() {
    let o = pshodge(&["eval", "--g", "2", "--n", "1", "--space", "ps", MUMFORD]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1/576\n");

    let o = pshodge(&["eval", "--g", "2", "--n", "1", "--space", "stable", MUMFORD]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn empty_moduli_are_user_errors() {
    let o = pshodge(&["eval", "--g", "1", "--n", "1", "--space", "ps", "psi1"]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains("(1,1) is not a pseudostable index"), "{msg}");
    assert!(
        msg.contains("(0,0), (0,1), (0,2), (1,0), (1,1), (2,0)"),
        "{msg}"
    );

    let o = pshodge(&["eval", "--g", "1", "--n", "0", "psi1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a stable index"));
}

#[test]
fn parse_errors_are_user_errors() {
    let o = pshodge(&["eval", "--g", "2", "--n", "2", "psi3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("psi index 3 exceeds n=2"));

    let o = pshodge(&["eval", "--g", "2", "--n", "2", "psi1 +"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("column 7"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(pshodge(&["eval", "--g", "2"]).status.code(), Some(1));
    assert_eq!(pshodge(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        pshodge(&["eval", "--g", "2", "--n", "1", "--space", "both", "psi1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pshodge(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_has_the_five_keys_in_order() {
    let o = pshodge(&[
        "eval", "--g", "2", "--n", "1", "--space", "ps", "--json", MUMFORD,
    ]);
    let text = stdout(&o);
    let value: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let obj = value.as_object().unwrap();
    assert_eq!(obj.len(), 5);
    assert_eq!(obj["g"], 2);
    assert_eq!(obj["n"], 1);
    assert_eq!(obj["space"], "ps");
    assert_eq!(obj["expr"], MUMFORD);
    assert_eq!(obj["value"], "-1/576");
    let positions: Vec<usize> = ["\"g\"", "\"n\"", "\"space\"", "\"expr\"", "\"value\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn repeated_evaluation_is_byte_identical() {
    let args = [
        "eval",
        "--g",
        "3",
        "--n",
        "2",
        "--space",
        "ps",
        "lambda1^2*psi1^3*psi2^2",
    ];
    let first = pshodge(&args);
    let second = pshodge(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(0));
}

#[test]
fn series_rows() {
    let o = pshodge(&["series", "--n", "1", "--g-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2\t-1/576\t-1/576\tPASS\n"), "{text}");
    assert!(text.contains("3\t-1/27648\t-1/27648\tPASS\n"), "{text}");

    let o = pshodge(&["series", "--n", "2", "--g-max", "2"]);
    assert!(stdout(&o).contains("2\t-1/576\t-1/576\tPASS\n"));

    assert_eq!(
        pshodge(&["series", "--n", "1", "--g-max", "7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pshodge(&["series", "--n", "0", "--g-max", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn selfcheck_passes_and_is_deterministic() {
    let a = pshodge(&["selfcheck"]);
    let b = pshodge(&["selfcheck"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("PASS  hat-lambda1 squared"));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn batch_keeps_order_and_reports_failures_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("batch.txt");
    write(
        &file,
        "psi1^7\n\n# comment\nlambda1*psi1^6\npsi2\nlambda2*psi1^5\nlambda3*psi1^4\n",
    );
    let path = file.to_str().unwrap();
    let o = pshodge(&[
        "eval", "--g", "3", "--n", "1", "--file", path, "--jobs", "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "1\t1/82944\n4\t7/138240\n6\t41/580608\n7\t31/967680\n"
    );
    assert!(stderr(&o).contains("line 5: psi2: psi index 2 exceeds n=1"));

    let serial = pshodge(&["eval", "--g", "3", "--n", "1", "--file", path]);
    assert_eq!(serial.stdout, o.stdout);
}

#[test]
fn eval_with_cache_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("wk.tsv");
    let c = cache.to_str().unwrap();
    let first = pshodge(&[
        "eval",
        "--g",
        "3",
        "--n",
        "1",
        "--cache",
        c,
        "lambda2*psi1^5",
    ]);
    assert_eq!(stdout(&first), "41/580608\n");
    let table = std::fs::read_to_string(&cache).unwrap();
    assert!(table.starts_with("PSHODGE-WKCACHE v1\n"));
    let second = pshodge(&[
        "eval",
        "--g",
        "3",
        "--n",
        "1",
        "--cache",
        c,
        "lambda2*psi1^5",
    ]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), table);
}

#[test]
fn tampered_cache_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("wk.tsv");
    write(&cache, "PSHODGE-WKCACHE v1\n1\t1\t1\t1\t25\n");
    let c = cache.to_str().unwrap();
    let o = pshodge(&["eval", "--g", "1", "--n", "1", "--cache", c, "psi1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("integrity check failed"),
        "{}",
        stderr(&o)
    );

    write(&cache, "PSHODGE-WKCACHE v1\n1\t1\t1\t1\n");
    let o = pshodge(&["cache", "load", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2:"));

    write(&cache, "PSHODGE-WKCACH v1\n");
    let o = pshodge(&["cache", "load", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a cache file"));
}

#[test]
fn cache_store_load_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("wk.tsv");
    let c = cache.to_str().unwrap();
    let o = pshodge(&["cache", "store", c, "--g-max", "2", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let table = std::fs::read_to_string(&cache).unwrap();
    assert!(table.contains("\n1\t1\t1\t1\t24\n"));
    assert_eq!(pshodge(&["cache", "load", c]).status.code(), Some(0));
    let o = pshodge(&["cache", "verify", c]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verified "));

    let missing = dir.path().join("none.tsv");
    let o = pshodge(&["cache", "load", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("loaded 0 entries"));
}
