use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn limitlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limitlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("LIMITLAB_SEED")
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/../../schemas/v1/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Runs a command expected to succeed and checks its artifact against the schema.
fn ok(args: &[&str], artifact: &str, schema_name: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let out = limitlab(args, dir.path());
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap();
    let file = read_json(&dir.path().join(artifact));
    assert_eq!(stdout, file);
    assert_valid(schema_name, &file);
    file
}

fn fails(args: &[&str], code: i32) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let out = limitlab(args, dir.path());
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_valid("error", &err);
    err
}

#[test]
fn verify_exact_mobius() {
    let r = ok(&["verify", "--system", "mobius", "--immersion", "exact"], "verify.json", "verify");
    assert!(r["conjugacy"]["max_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["injectivity"]["collision_count"], 0);
}

#[test]
fn verify_fails_where_the_immersion_is_undefined() {
    let err = fails(&["verify", "--system", "mobius", "--domain", "[-1,1]", "--immersion", "exact"], 3);
    assert_eq!(err["error"], "immersion_undefined");
    assert!(err["message"].as_str().unwrap().starts_with("immersion_undefined_at=1.0"));
    assert_eq!(err["point"], serde_json::json!([1.0]));
}

#[test]
fn validation_errors_exit_2() {
    fails(&["simulate", "--system", "lorenz"], 2);
    fails(&["simulate", "--system", "rotation-scaling", "--param", "theta=7"], 2);
    fails(&["simulate", "--set", "nonsense=1"], 2);
    fails(&["simulate", "--set", "tail=0.5"], 2);
    fails(&["verify", "--system", "negation"], 2);
    fails(&["basins", "--domain", "[0,1"], 2);
    fails(&["basins", "--system", "rotation-scaling", "--domain", "[0,1]"], 2);
    fails(&["learn", "--dict", "wavelet:3"], 2);
    fails(&["frobnicate"], 2);
    fails(&["render"], 2);
}

#[test]
fn numeric_errors_exit_3() {
    let err = fails(&["learn", "--system", "mobius", "--dict", "monomial:30", "--domain", "[0,0.01]"], 3);
    assert_eq!(err["error"], "singular_gram");
}

#[test]
fn simulate_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = limitlab(&["simulate", "--system", "mobius", "--x0", "0", "--set", "steps=40"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("k,x1\n0,0\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 42);
    let r = read_json(&dir.path().join("simulate.json"));
    assert_valid("simulate", &r);
    assert!((r["final_point"][0].as_f64().unwrap() + 1.0).abs() < 1e-11);
}

#[test]
fn backward_simulation_needs_an_inverse() {
    let r = ok(&["simulate", "--system", "mobius-inverse", "--x0", "0", "--backward"], "simulate.json", "simulate");
    assert_eq!(r["direction"], "backward");
    let err = fails(&["simulate", "--system", "scalar-linear", "--param", "a=0", "--backward"], 2);
    assert_eq!(err["error"], "no_inverse");
}

#[test]
fn limits_find_both_mobius_fixed_points() {
    let r = ok(&["limits", "--system", "mobius", "--seeds", "0;1;-0.5"], "catalog.json", "catalog");
    let members = r["catalog"]["members"].as_array().unwrap();
    assert_eq!(members.len(), 2);
    let r = ok(&["limits", "--system", "rotation-scaling", "--alpha"], "catalog.json", "catalog");
    assert_eq!(r["with_alpha"], true);
}

#[test]
fn basins_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = limitlab(&["basins", "--system", "cot-map", "--domain", "[0,3.141592653589793]", "--set", "grid=51"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("basins.json"));
    assert_valid("basins", &r);
    assert!(!r["witnesses"].as_array().unwrap().is_empty());

    let out = limitlab(&["render"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("basins.csv\tbasins.ppm"));
    let ppm = std::fs::read_to_string(dir.path().join("basins.ppm")).unwrap();
    assert!(ppm.starts_with("P3\n51 1\n255\n"));
}

#[test]
fn learn_recovers_the_mobius_lift() {
    let r = ok(
        &["learn", "--system", "mobius", "--dict", "rational-pole:1:1", "--domain", "[-0.9,0.5]"],
        "lift.json",
        "lift",
    );
    assert!(r["fit"]["train_residual"].as_f64().unwrap() < 1e-9);
    assert!((r["k"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--system", "cot-map", "--domain", "[0,3.141592653589793]", "--dicts", "fourier:1-2", "--ridges", "0,1e-8"];
    let out = limitlab(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("sweep.json"));
    assert_valid("sweep", &r);
    assert_eq!(r["report"]["rows"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("dict_kind,dict_size,ridge,residual_heldout,collapse_ratio,min_sep_ratio\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn demo_passes_and_honours_the_seed_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_limitlab"))
        .args(["demo", "--out"])
        .arg(dir.path())
        .env("LIMITLAB_SEED", "7")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("summary.json"));
    assert_valid("demo", &r);
    assert_eq!(r["all_pass"], true);
    assert_eq!(r["seed"], 7);
}

#[test]
fn settings_table_lists_every_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = limitlab(&["settings"], dir.path());
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    for key in ["tol_settle", "tol_cluster", "tail", "grid", "delta_img"] {
        assert!(names.contains(&key), "{key}");
    }
}
