use std::process::Command;

use serde_json::Value;

fn maggeo(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_maggeo")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

#[test]
fn clifford_table_for_minkowski() {
    let (code, report) = maggeo(&["clifford-table", "--signature", "1,3"]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], "maggeo/1");
    let r = &report["results"][0];
    let table = r["values"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 16);
    assert!(table.iter().all(|row| row.as_array().unwrap().len() == 16));
    assert_eq!(r["defects"]["relation"], 0.0);
}

#[test]
fn schwarzschild_residual() {
    let (code, report) = maggeo(&[
        "residual", "--metric", "schwarzschild", "--param", "M=1", "--connection", "levi_civita", "--points", "20",
        "--seed", "7",
    ]);
    assert_eq!(code, 0);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 20);
    for r in results {
        assert!(r["defects"]["e_metric"].as_f64().unwrap() < 1e-8);
        let r_coord = r["point"][1].as_f64().unwrap();
        assert!((3.0..=10.0).contains(&r_coord));
    }
}

#[test]
fn compare_metric_reports_inequivalence() {
    let (code, report) = maggeo(&["gamma-check", "--signature", "1,3", "--compare-metric", "diag(1,-4,-1,-1)"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"][0]["values"]["compare_intertwiner_dimension"], 0);
}

#[test]
fn violations_exit_one() {
    let (code, report) = maggeo(&["decompose", "--metric", "schwarzschild", "--tol", "0"]);
    assert_eq!(code, 1);
    assert_eq!(report["summary"]["pass"], false);
    assert!(!report["summary"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["curvature", "--metric", "no_such_metric"],
        vec!["gamma-check", "--signature", "2,1"],
        vec!["curvature", "--metric", "sphere", "--at", "1,2,3"],
        vec!["curvature", "--metric", "sphere", "--param", "Q=2"],
        vec!["curvature", "--metric", "diag(1, -r^2)"],
        vec!["curvature", "--signature", "1,1", "--metric", "diag(1, -y^2)"],
    ] {
        let (code, _) = maggeo(&args);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn inline_metric_and_json_file() {
    let dir = std::env::temp_dir().join(format!("maggeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, stdout) = maggeo(&[
        "curvature",
        "--signature",
        "2,0",
        "--metric",
        "diag(1, sin(x0)^2)",
        "--at",
        "0.7,0.1",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, Value::Null);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // unit sphere: the scalar is -2 in this sign convention
    let scalar = report["results"][0]["values"]["scalar"].as_f64().unwrap();
    assert!((scalar + 2.0).abs() < 1e-12, "{scalar}");
    std::fs::remove_dir_all(dir).unwrap();
}
