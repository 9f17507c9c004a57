use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cbinom(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbinom"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawn cbinom")
}

fn run(args: &[&str]) -> Output {
    // an empty working directory keeps a stray disputed.txt out of the run
    let dir = tempfile::tempdir().unwrap();
    cbinom(args, dir.path())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')))
        .map(str::trim)
        .unwrap_or_else(|| panic!("no field {key} in\n{text}"))
}

fn without_elapsed(mut v: Value) -> Value {
    for r in v["records"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn full_run_json() {
    let o = run(&["verify", "--all", "--digits", "40", "--tol", "1e-25", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = v["records"].as_array().unwrap();
    assert!(records.len() >= 45);
    assert_eq!(v["summary"]["pass"].as_u64(), Some(records.len() as u64));
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["disputed"], 0);
    assert_eq!(v["config"]["digits"], 40);
    for r in records {
        for key in ["numeric_value", "abs_error", "tol", "closed_form_value"] {
            assert!(r[key].is_string(), "{key} in {r}");
        }
    }
}

#[test]
fn json_is_deterministic() {
    let args = ["verify", "--target", "S:3,Z:1,EQ27_29,FINITE_BINOM_SUM,THEOREM1:2", "--digits", "25", "--format", "json"];
    let a: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    let b: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    assert_eq!(without_elapsed(a.clone()), without_elapsed(b));
    let names: Vec<&str> = a["records"].as_array().unwrap().iter().map(|r| r["target"].as_str().unwrap()).collect();
    assert_eq!(names, ["S:3", "Z:1", "EQ27_29", "FINITE_BINOM_SUM", "THEOREM1:2"]);
}

#[test]
fn eval_prints_numeric_and_catalog_value() {
    let o = run(&["eval", "--family", "s", "--n", "4", "--digits", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "family"), "S:4");
    let numeric = field(&text, "numeric_value");
    let closed = field(&text, "closed_form_value");
    assert!(numeric.starts_with("5.2915485716514654008212772475"), "{numeric}");
    assert!(closed.starts_with("5.2915485716514654008212772475"), "{closed}");
    assert_eq!(field(&text, "pass"), "true");
}

#[test]
fn lemma_prints_exact() {
    let o = run(&["lemma", "--id", "1", "--k", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "residual"), "exact");
}

#[test]
fn closed_form_roundtrip() {
    let o = run(&["closed-form", "--family", "Z", "--n", "1", "--digits", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["closed_form"], "1/2*pi");
    assert!(v["value"].as_str().unwrap().starts_with("1.5707963267948966192"));
}

#[test]
fn logsine_moment_csv() {
    let o = run(&["logsine", "--n", "2", "--digits", "25", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("check,value,levels_used"));
    assert!(lines[1].starts_with("MOMENT:2,"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["eval", "--family", "s", "--n", "4", "--digits", "9"][..],
        &["eval", "--family", "nope", "--n", "1"],
        &["verify", "--target", "S:99"],
        &["verify"],
        &["lemma", "--id", "7", "--k", "3"],
        &["eval", "--family", "s", "--n", "4", "--terms", "5"],
        &["report", "--input", "missing.json"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failure_and_non_convergence_codes() {
    // a zero tolerance rejects the rounding-level error
    assert_eq!(run(&["verify", "--target", "S:3", "--digits", "20", "--tol", "0"]).status.code(), Some(1));
    // too few direct terms for 80 digits
    let o = run(&["verify", "--target", "L:2,S:3", "--terms", "100", "--digits", "80", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["eval", "--family", "L", "--n", "2", "--terms", "100", "--digits", "80"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(field(&stdout(&o), "converged"), "false");
}

#[test]
fn disputed_entries_do_not_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("disputed.txt"), "# quarantined\nS:3\n").unwrap();
    let o = cbinom(&["verify", "--target", "S:3,Z:1", "--digits", "20", "--tol", "0", "--format", "json"], dir.path());
    // Z:1 is exact, so only the disputed S:3 misses a zero tolerance
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["disputed"], 1);
    assert_eq!(v["records"][0]["disputed"], true);

    let list = dir.path().join("other.txt");
    std::fs::write(&list, "Q:1\n").unwrap();
    let o = cbinom(&["verify", "--target", "Z:1", "--disputed", list.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_rerenders_saved_json() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("report.json");
    let o = cbinom(
        &["verify", "--target", "V:1,ANTISYMMETRY", "--digits", "20", "--format", "json", "--output", saved.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("summary: 2 pass"));

    let o = cbinom(&["report", "--input", saved.to_str().unwrap(), "--format", "csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("V:1,catalog,20,"));

    let o = cbinom(&["report", "--input", saved.to_str().unwrap()], dir.path());
    assert!(stdout(&o).contains("summary: 2 pass, 0 fail, 0 disputed"));
}
