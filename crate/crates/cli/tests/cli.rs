use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"))
}

fn g2morse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2morse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(cmd: &str, config: &std::path::Path, extra: &[&str]) -> (Value, i32) {
    let mut args = vec![cmd, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = g2morse(&args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?} stderr {:?}", out.stdout, String::from_utf8_lossy(&out.stderr))
    });
    (v, code)
}

fn temp_config(v: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), v.to_string()).unwrap();
    f
}

const ZEROS: [&str; 7] = ["0"; 7];

fn diag(d: [i64; 7]) -> Value {
    let rows: Vec<Vec<i64>> = (0..7).map(|i| (0..7).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
    json!(rows)
}

#[test]
fn check_reports_order_and_compatibility() {
    let (v, code) = run_json("check", &golden("m3"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], 8);
    assert_eq!(v["results"]["compatible"], true);
    assert_eq!(v["results"]["elements"].as_array().unwrap().len(), 8);

    let empty = temp_config(&json!({"name": "torus", "generators": []}));
    let (v, code) = run_json("check", empty.path(), &[]);
    assert_eq!((code, v["results"]["order"].as_u64()), (0, Some(1)));
}

#[test]
fn orientation_reversing_generator_is_rejected() {
    let cfg = temp_config(&json!({
        "name": "reflection",
        "generators": [{"matrix": diag([-1, 1, 1, 1, 1, 1, 1]), "translation": ZEROS}]
    }));
    let out = g2morse(&["check", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("determinant -1"), "{err}");
}

#[test]
fn incompatible_generator_fails_check_with_details() {
    // Swapping two coordinates and negating a third preserves orientation but not φ₀.
    let mut m = diag([0, 0, -1, 1, 1, 1, 1]);
    m[0][1] = json!(1);
    m[1][0] = json!(1);
    let cfg = temp_config(&json!({"name": "swap", "generators": [{"matrix": m, "translation": ZEROS}]}));
    let (v, code) = run_json("check", cfg.path(), &[]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert!(v["results"]["error"].as_str().unwrap().contains("not G2-compatible"));
    // The other commands refuse to run.
    let out = g2morse(&["invariants", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let bad_json = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad_json.path(), "{ not json").unwrap();
    let unknown = temp_config(&json!({"name": "x", "generators": [], "colour": 1}));
    let short = temp_config(&json!({"name": "x", "generators": [{"matrix": [1, 0], "translation": []}]}));
    for f in [bad_json.path(), unknown.path(), short.path()] {
        let out = g2morse(&["check", "--config", f.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(g2morse(&["check"]).status.code(), Some(2));
    assert_eq!(g2morse(&["check", "--config", "/nonexistent.json"]).status.code(), Some(2));
    let m1 = golden("m1");
    let out = g2morse(&["spectrum", "--config", m1.to_str().unwrap(), "--radius-sq", "one"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn golden_invariants() {
    for (name, mu3, mu4) in [("t7", "-8", "-12"), ("m1", "-4", "-8"), ("m2", "-2", "-6"), ("m3", "-1", "-5")] {
        let (v, code) = run_json("invariants", &golden(name), &[]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["results"]["mu3"], mu3, "{name}");
        assert_eq!(v["results"]["mu4"], mu4, "{name}");
        assert!(v["results"]["max_abs_difference"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn spectrum_on_m1_and_trivial_radii() {
    let (v, code) = run_json("spectrum", &golden("m1"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["mismatches"], 0);
    assert!(v["results"]["classes"].as_u64().unwrap() > 0);

    let (v, code) = run_json("spectrum", &golden("t7"), &["--radius-sq", "1"]);
    assert_eq!(code, 0);
    let dims: Vec<(String, i64)> = v["results"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["kind"].as_str().unwrap().to_string(), r["dim_formula"].as_i64().unwrap()))
        .collect();
    assert_eq!(dims, vec![("H".to_string(), 112), ("Hprime".to_string(), 168)]);

    let (v, code) = run_json("spectrum", &golden("t7"), &["--radius-sq", "0"]);
    assert_eq!(code, 0);
    assert!(v["results"]["reports"].as_array().unwrap().is_empty());
}

#[test]
fn zeta_on_m1() {
    let (v, code) = run_json("zeta", &golden("m1"), &[]);
    assert_eq!(code, 0);
    let elements = v["results"]["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 2);
    for e in elements {
        assert!((e["value_at_zero"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    }
}

#[test]
fn identities_are_reproducible() {
    let args = ["--trials", "1", "--seed", "7", "--strict-types"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_s");
        serde_json::to_string(&v).unwrap()
    };
    let (a, code_a) = run_json("identities", &golden("m3"), &args);
    let (b, code_b) = run_json("identities", &golden("m3"), &args);
    assert_eq!((code_a, code_b), (0, 0));
    assert_eq!(a["parameters"]["seed"], 7);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn a_tiny_tolerance_turns_residuals_into_failures() {
    let (v, code) = run_json("identities", &golden("t7"), &["--trials", "2", "--tolerance", "0"]);
    assert!(v["results"]["max_residual"].as_f64().unwrap() > 0.0);
    assert_eq!((code, v["passed"].as_bool()), (1, Some(false)));
}

#[test]
fn csv_output() {
    let m2 = golden("m2");
    let out = g2morse(&["invariants", "--config", m2.to_str().unwrap(), "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(r.headers().unwrap().iter().next(), Some("quantity"));
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0][1], "-2");
    assert_eq!(&rows[1][1], "-6");
}

#[test]
fn config_echo_has_defaults() {
    let cfg = temp_config(&json!({"name": "bare"}));
    let (v, _) = run_json("check", cfg.path(), &[]);
    assert_eq!(v["config"]["oracle_radius_sq"], "9");
    assert_eq!(v["config"]["trials"], 100);
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["frame"][0][0], "1");
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
}
