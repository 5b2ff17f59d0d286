use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn vv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vv"))
        .args(args)
        .env_remove("VV_PRECISION")
        .output()
        .expect("run vv")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Numbers agree to `1e-8 + 1e-6 |expected|`; free-text `detail` fields are skipped.
fn close(actual: &Value, expected: &Value, path: &str) -> Result<(), String> {
    match (actual, expected) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (a - b).abs() <= 1e-8 + 1e-6 * b.abs() {
                Ok(())
            } else {
                Err(format!("{path}: {a} != {b}"))
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} != {}", a.len(), b.len()));
            }
            a.iter()
                .zip(b)
                .enumerate()
                .try_for_each(|(i, (x, y))| close(x, y, &format!("{path}[{i}]")))
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<_> = a.keys().collect();
            let kb: Vec<_> = b.keys().collect();
            if ka != kb {
                return Err(format!("{path}: keys {ka:?} != {kb:?}"));
            }
            for (k, v) in b {
                if k == "detail" {
                    continue;
                }
                close(&a[k], v, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (a, b) if a == b => Ok(()),
        (a, b) => Err(format!("{path}: {a} != {b}")),
    }
}

fn check_golden(name: &str, args: &[&str]) {
    let o = vv(args);
    assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    let actual = stdout_json(&o);
    let file = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("VV_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&file, &o.stdout).unwrap();
        return;
    }
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    if let Err(e) = close(&actual, &expected, name) {
        panic!("golden mismatch: {e}");
    }
}

#[test]
fn golden_verify_default_grid() {
    check_golden("verify_default", &["verify", "--json"]);
}

#[test]
fn golden_index() {
    check_golden("index_a1_g2_h3", &["index", "--group", "A1", "--g", "2", "--h", "3"]);
    check_golden("index_a1_g3_h3", &["index", "--group", "A1", "--g", "3", "--h", "3"]);
    check_golden("index_a2_g2_h4", &["index", "--group", "A2", "--g", "2", "--h", "4"]);
}

#[test]
fn golden_points_and_limit() {
    check_golden("points_a1_h1", &["points", "--group", "A1", "--h", "1"]);
    check_golden("limit_a1_g2_h3", &["limit", "--group", "A1", "--g", "2", "--h", "3"]);
}

#[test]
fn roots_summary() {
    let a1 = stdout_json(&vv(&["roots", "--group", "A1", "--json"]));
    assert_eq!(a1["dual_coxeter"], 2);
    let a2 = stdout_json(&vv(&["roots", "--group", "A2", "--json"]));
    assert_eq!(a2["gram_det"], 3);
    assert_eq!(a2["weyl_order"], 6);
    assert_eq!(vv(&["roots", "--group", "Z3"]).status.code(), Some(2));
}

#[test]
fn points_counts() {
    let p = stdout_json(&vv(&["points", "--group", "A1", "--h", "1"]));
    assert_eq!(p["count"], 6);
    assert_eq!(p["regular"], 4);
    let p = stdout_json(&vv(&["points", "--group", "A1", "--h", "1", "--at", "minus-one"]));
    assert_eq!(p["count"], 2);
    assert_eq!(p["regular"], 0);
    // (h + c)^ℓ det B
    let p = stdout_json(&vv(&["points", "--group", "A2", "--h", "2"]));
    assert_eq!(p["count"], 75);
}

#[test]
fn index_values() {
    let r = stdout_json(&vv(&["index", "--group", "A1", "--g", "2", "--h", "1"]));
    assert!((r["verlinde_t0"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    let r = stdout_json(&vv(&["index", "--group", "A1", "--g", "2", "--h", "3"]));
    assert!(r["vanishing_order"].as_u64().unwrap() >= 1);
    assert_eq!(vv(&["index", "--group", "A1", "--h", "3"]).status.code(), Some(2));
}

#[test]
fn index_csv_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("nodes.csv");
    let out = dir.path().join("result.json");
    let o = vv(&[
        "index", "--group", "A1", "--g", "2", "--h", "2", "--nodes", "6", "--t-min", "-0.8",
        "--csv", csv.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,value_re,value_im");
    assert_eq!(text.lines().count(), 7);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["polynomial"], serde_json::json!([10.0, 0.0, -10.0, 0.0]));
}

#[test]
fn explicit_nodes() {
    let r = stdout_json(&vv(&["index", "--group", "A1", "--g", "2", "--h", "3", "--nodes", "-0.1,-0.3,-0.5,-0.7,-0.85"]));
    assert_eq!(r["polynomial"], serde_json::json!([20.0, 4.0, -16.0, 0.0]));
    assert_eq!(vv(&["index", "--group", "A1", "--g", "2", "--h", "3", "--nodes", "3"]).status.code(), Some(2));
}

#[test]
fn flag_mode_runs() {
    let o = vv(&["index", "--group", "A1", "--g", "2", "--h", "2", "--flag-weight", "0", "--fiber-diff"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    // (1 - t) (10 - 10 t²)
    let p: Vec<f64> = r["polynomial"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (a, b) in p.iter().zip([10.0, -10.0, -10.0, 10.0, 0.0]) {
        assert!((a - b).abs() < 1e-8, "{p:?}");
    }
}

#[test]
fn limit_report() {
    let r = stdout_json(&vv(&["limit", "--group", "A1", "--g", "2", "--h", "1"]));
    let paths = r["paths"].as_array().unwrap();
    assert_eq!(paths.len(), 2);
    for p in paths {
        assert_eq!(p["kind"], "colliding");
        assert!((p["xi1"][0][1].as_f64().unwrap().abs() - 1.0).abs() < 1e-4);
    }
    let r = stdout_json(&vv(&["limit", "--group", "A1", "--g", "2", "--h", "3"]));
    let kinds: Vec<&str> = r["paths"].as_array().unwrap().iter().map(|p| p["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"regular") && kinds.contains(&"colliding"));
}

#[test]
fn limit_path_failure_exit_code() {
    let o = vv(&["limit", "--group", "A1", "--g", "2", "--h", "1", "--min-step", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_detects_fault() {
    let o = vv(&["verify", "--group", "A1", "--g", "2", "--h", "3", "--inject-fault", "theta-sign", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["passed"], false);
}

#[test]
fn verify_text_output() {
    let o = vv(&["verify", "--group", "A1", "--g", "2", "--h", "2"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS") || l == "verdict: pass"), "{text}");
}

#[test]
fn output_is_deterministic() {
    for precision in ["double", "extended"] {
        let args = ["index", "--group", "A2", "--g", "2", "--h", "4", "--precision", precision];
        let a = vv(&args);
        let b = vv(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let a = vv(&["limit", "--group", "A2", "--g", "2", "--h", "2"]);
    let b = vv(&["limit", "--group", "A2", "--g", "2", "--h", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_vv"))
        .args(["index", "--group", "A1", "--g", "2", "--h", "1"])
        .env("VV_PRECISION", "quad")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_vv"))
        .args(["index", "--group", "A1", "--g", "2", "--h", "1"])
        .env("VV_PRECISION", "extended")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn missing_genus_is_config_error() {
    assert_eq!(vv(&["limit", "--group", "A1", "--h", "3"]).status.code(), Some(2));
    assert_eq!(vv(&["index", "--group", "A1", "--g", "1", "--h", "3"]).status.code(), Some(2));
}
