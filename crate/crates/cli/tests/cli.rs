use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orderlab_cli::commands::check_catalog;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderlab")).args(args).current_dir(root()).env_remove("ORDERLAB_BUDGET").output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    (serde_json::from_slice(&out.stdout).unwrap_or(Value::Null), out.status.code().unwrap())
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_on_shipped_files_matches_the_documented_examples() {
    let (doc, code) = json(&["check", "catalog/cuz.json", "--prop", "preminimal"]);
    assert_eq!((doc["verdict"]["value"].as_str(), code), (Some("No"), 0));
    let (doc, code) = json(&["check", "catalog/cone33.json", "--prop", "almost-unperforated", "--box", "8"]);
    assert_eq!((doc["verdict"]["value"].as_str(), code), (Some("No"), 0));
    assert_eq!(doc["verdict"]["certificate"]["n"], 2);
    let (doc, code) = json(&["check", "catalog/nsquare.json", "--prop", "refinement"]);
    assert_eq!((doc["verdict"]["value"].as_str(), code), (Some("Yes"), 0));
}

#[test]
fn unknown_verdict_exits_three() {
    // Refinement on Z has no closed form and the sampled search cannot decide it.
    let (doc, code) = json(&["check", "cuz", "--prop", "refinement"]);
    assert_eq!(doc["verdict"]["value"], "Unknown");
    assert_eq!(code, 3);
    assert!(doc["verdict"]["certificate"]["bound"].is_string());
}

#[test]
fn malformed_instance_exits_two_with_a_field_pointer() {
    let dir = std::env::temp_dir().join(format!("orderlab-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.json");
    std::fs::write(&p, r#"{"backend":"vector","dim":2,"generators":[[1,0],[0,"x"]],"order_mode":"algebraic"}"#).unwrap();
    let out = run(&["check", p.to_str().unwrap(), "--prop", "simple"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/generators/1/1"), "{}", stderr(&out));
}

#[test]
fn bad_flags_and_names_exit_two() {
    assert_eq!(run(&["check", "cuz", "--prop", "no-such-property"]).status.code(), Some(2));
    assert_eq!(run(&["check", "no-such-instance", "--prop", "simple"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--thm", "X9.9"]).status.code(), Some(2));
    assert_eq!(run(&["gr", "cone33", "--elem", "[1,2,3]"]).status.code(), Some(2));
}

#[test]
fn budget_environment_variable_is_applied_and_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_orderlab"))
        .args(["check", "nat", "--prop", "simple", "--format", "json"])
        .env("ORDERLAB_BUDGET", "box=3,depth=5")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((doc["budget"]["box"].as_i64(), doc["budget"]["depth"].as_i64()), (Some(3), Some(5)));
    let out = Command::new(env!("CARGO_BIN_EXE_orderlab")).args(["check", "nat", "--prop", "simple"]).env("ORDERLAB_BUDGET", "bogus=1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_lists_every_property() {
    let (doc, code) = json(&["report", "num2_3"]);
    assert_eq!(code, 0);
    let props = doc["properties"].as_object().unwrap();
    assert_eq!(props.len(), 18);
    assert_eq!(props["Refinement"]["value"], "No");
    assert_eq!(props["Cancellative"]["value"], "Yes");
    assert_eq!(props["AlmostUnperforated"]["value"], "No");
    let (doc, _) = json(&["report", "cuz"]);
    let props = &doc["properties"];
    assert_eq!((props["Preminimal"]["value"].as_str(), props["AlmostUnperforated"]["value"].as_str()), (Some("No"), Some("Yes")));
    assert_eq!(props["AlmostDivisible"]["value"], "Yes");
}

#[test]
fn verify_examples_pass() {
    let (doc, code) = json(&["verify", "--thm", "L5.2", "--instance", "ex54"]);
    assert_eq!(code, 0);
    let f = &doc["results"][0]["details"]["featured"];
    assert_eq!(doc["results"][0]["status"], "Pass");
    assert_eq!([&f["unit_leq"], &f["rel_p"], &f["rel_s"], &f["leq"]], ["Yes", "Yes", "No", "No"]);
    let (doc, code) = json(&["verify", "--thm", "T6.5", "--instance", "qplus"]);
    assert_eq!((doc["results"][0]["status"].as_str(), code), (Some("Pass"), 0));
    let (doc, code) = json(&["verify", "--thm", "P4.3"]);
    assert_eq!(code, 0);
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["status"] == "Pass"));
}

#[test]
fn vacuous_results_name_their_hypothesis() {
    let (doc, _) = json(&["verify", "--all"]);
    for r in doc["results"].as_array().unwrap() {
        if r["status"] == "Vacuous" {
            assert!(r["failing_hypothesis"].as_str().is_some_and(|h| !h.is_empty()), "{r}");
        }
    }
}

#[test]
fn tensor_and_cu_commands() {
    let (doc, code) = json(&["tensorz", "ex54", "--lhs", r#"[[[[3],[1]],"compact:1"]]"#, "--rhs", r#"[[[[4],[1]],"compact:1"]]"#]);
    assert_eq!((doc["verdict"]["value"].as_str(), code), (Some("Yes"), 0));
    assert!(doc["chain"]["depth"].as_u64().unwrap() <= 8);
    let (doc, _) = json(&["tensorz", "qplus", "--lhs", r#"[["1","soft:1"]]"#]);
    assert_eq!(doc["verdict"]["value"], "No");
    let (doc, code) = json(&["cu", "qplus", "--axiom", "o5"]);
    assert_eq!((doc["verdict"]["value"].as_str(), code), (Some("Yes"), 0));
    let (doc, code) = json(&["cu", "num2_3", "--thm", "T6.5"]);
    assert_eq!((doc["results"][0]["failing_hypothesis"].as_str(), code), (Some("AlmostDivisible"), 0));
}

#[test]
fn shipped_catalog_replays_and_round_trips() {
    let mismatches = check_catalog(&root().join("catalog")).expect("catalog readable");
    assert!(mismatches.is_empty(), "{mismatches:?}");
    let out = run(&["catalog", "--check", "catalog"]);
    assert_eq!(out.status.code(), Some(0));
}
