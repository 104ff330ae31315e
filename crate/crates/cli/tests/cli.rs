use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cycord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycord"))
        .args(args)
        .env_remove("CYCORD_BUDGET")
        .output()
        .expect("spawn cycord")
}

fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/run_report.schema.json");
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Runs, checks the exit code and validates the report against the schema.
fn report(args: &[&str], code: i32) -> Value {
    let out = cycord(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

fn tmp_file(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn eval_plus_triple() {
    let v = report(&["eval", "--order", "plus", "--triple", "1,2,3"], 0);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["outputs"]["value"], true);
}

#[test]
fn rational_rotation_is_rejected() {
    let out = cycord(&["eval", "--order", "rot:1/2", "--triple", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("cycord: "));
}

#[test]
fn malformed_surd_and_usage_errors_exit_2() {
    assert_eq!(cycord(&["eval", "--order", "rot:sqrt(", "--triple", "0,1,2"]).status.code(), Some(2));
    assert_eq!(cycord(&["eval", "--order", "plus"]).status.code(), Some(2));
    assert_eq!(cycord(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn eval_rotation_axioms() {
    let v = report(&["eval", "--order", "rot:sqrt(2)-1", "--axioms", "-5,5"], 0);
    assert!(v["outputs"].is_object());
}

#[test]
fn classify_recovers_interval() {
    let v = report(&["classify", "--oracle", "rot:sqrt(2)-1", "--max-den", "12"], 0);
    let out = &v["outputs"];
    let text = out.to_string();
    assert!(text.contains("\"2/5\""), "{text}");
    assert!(text.contains("\"5/12\""), "{text}");
}

#[test]
fn classify_discrete() {
    let v = report(&["classify", "--oracle", "plus"], 0);
    assert_eq!(v["outputs"]["type"], "discrete_plus");
}

#[test]
fn kron_witness_and_exhaustion() {
    let v = report(
        &[
            "kron", "witness", "--alpha", "sqrt(2)", "--beta", "sqrt(3)", "--ja", "0,0.5", "--jb", "0,0.5",
        ],
        0,
    );
    assert_eq!(v["outputs"]["m"], 3);
    assert!(v["display_only"]["frac_a"].as_str().unwrap().starts_with("0.2426"));

    let v = report(
        &[
            "--budget", "1", "kron", "witness", "--alpha", "sqrt(2)", "--beta", "sqrt(3)", "--ja", "0,0.01", "--jb",
            "0,0.01",
        ],
        3,
    );
    assert!(v["outputs"]["m"].is_null());
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cycord"))
        .args(["kron", "witness", "--alpha", "sqrt(2)", "--beta", "sqrt(3)", "--ja", "0,0.01", "--jb", "0,0.01"])
        .env("CYCORD_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inputs"]["budget"], 2);
}

#[test]
fn kron_dependent_pair_is_an_input_error() {
    let out = cycord(&[
        "kron", "witness", "--alpha", "sqrt(2)", "--beta", "2*sqrt(2)", "--ja", "0,0.5", "--jb", "0,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kron_ap_and_intersect() {
    report(&["kron", "ap", "--alpha", "sqrt(2)-1", "--k", "3", "--l", "-7"], 0);
    report(
        &[
            "kron", "intersect", "--alpha", "sqrt(2)", "--beta", "sqrt(3)", "--k", "1", "--n", "4", "--jb", "0,0.5",
            "--ja", "0.5,1",
        ],
        0,
    );
}

#[test]
fn cover_subcommands_validate() {
    let rot = "rot:sqrt(2)-1";
    report(&["cover", "add", "--order", rot, "--p", "1,2", "--q", "3,-4"], 0);
    report(&["cover", "lt", "--order", "plus", "--p", "0,1", "--q", "1,0"], 0);
    report(&["cover", "neg", "--order", rot, "--p", "2,0"], 0);
    report(&["cover", "ordered", "--order", rot, "--p", "5,-2"], 0);
    report(&["cover", "section", "--order", rot, "--g", "-7"], 0);
    report(&["cover", "quotient", "--order", rot, "--n", "3"], 0);
    report(&["cover", "cofinal", "--order", "lex", "--p", "4,9"], 0);
}

#[test]
fn winding_and_derived() {
    report(&["winding", "--alpha", "-sqrt(2)", "--l", "1", "--n", "3"], 0);
    let v = report(
        &["derived", "scaled", "--alpha", "sqrt(2)-1", "--m", "2", "--n", "3", "--triple", "0,1,5", "--check"],
        0,
    );
    assert_eq!(v["outputs"]["agree"], true);
    let v = report(
        &["derived", "shifted", "--alpha", "sqrt(2)-1", "--m", "1", "--n", "3", "--triple", "0,1,2", "--check"],
        0,
    );
    assert_eq!(v["outputs"]["agree"], true);
}

#[test]
fn normalize_and_decompose_atom_files() {
    let conj = tmp_file("conj.json", r#"[{"kind":1,"k1":1,"k2":0,"a":[0,0],"b":[3,1]}]"#);
    let v = report(&["normalize", "--atoms", conj.to_str().unwrap(), "--order", "lex"], 0);
    assert_eq!(v["outputs"]["sets"].as_array().unwrap().len(), 1);

    let disj = tmp_file(
        "disj.json",
        r#"[[{"kind":1,"k1":1,"a":[0,0],"b":[0,1]}],[{"kind":3,"k1":1,"n":2}]]"#,
    );
    report(&["normalize", "--atoms", disj.to_str().unwrap(), "--order", "alpha:sqrt(2)-1"], 0);

    let sub = tmp_file("sub.json", r#"[{"kind":1,"k1":1,"a":[0,0],"b":[0,1]}]"#);
    let v = report(&["decompose", "--formula", sub.to_str().unwrap(), "--alpha", "sqrt(2)-1"], 0);
    assert_eq!(v["outputs"]["sets"][0]["j"]["ambient"], "cyclic");

    let bad = tmp_file("bad.json", r#"[{"kind":9}]"#);
    let out = cycord(&["normalize", "--atoms", bad.to_str().unwrap(), "--order", "lex"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formula_commands() {
    let v = report(
        &["formula", "eval", "--order", "plus", "--text", "exists y in [0,3]. x + y = 5", "--assign", "x=2"],
        0,
    );
    assert_eq!(v["outputs"]["value"], true);

    let v = report(
        &["formula", "set", "--order", "plus", "--text", "x = 3 | x = 5 | x = 8 | x = 10", "--window", "0,12"],
        0,
    );
    assert_eq!(v["outputs"]["set"], serde_json::json!([3, 5, 8, 10]));

    let v = report(
        &[
            "formula", "cmp", "--order", "rot:sqrt(2)-1", "--text", "C(x, y, z)", "--other-order",
            "rot:sqrt(2)-1", "--other-text", "C(y, z, x)", "--window", "-3,3",
        ],
        0,
    );
    assert_eq!(v["outputs"]["equal"], true);

    let out = cycord(&["formula", "eval", "--order", "plus", "--text", "C(0, x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_tables() {
    let out = cycord(&[
        "--csv", "formula", "set", "--order", "plus", "--text", "x = 3 | x = 5 | x = 8 | x = 10", "--window", "0,12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 5, "{text}");
    assert_eq!(&rows[1..], ["3", "5", "8", "10"]);

    let out = cycord(&["--csv", "section", "--order", "rot:sqrt(2)-1", "--from", "-2", "--to", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().count() > 1);

    let out = cycord(&["--csv", "eval", "--order", "plus", "--triple", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["classify", "--oracle", "rot:(1+sqrt(5))/2-1", "--depth", "10"];
    let strip = |o: Output| -> String {
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"wall_time_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(cycord(&args));
    let b = strip(cycord(&args));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
