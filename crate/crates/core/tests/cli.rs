use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorgeo")).args(args).output().expect("spawn")
}

fn write_scene(dir: &Path, text: &str) -> String {
    let p = dir.join("scene.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn helix_frenet_csv_has_constant_curvature_columns() {
    let dir = tempfile::tempdir().unwrap();
    let scene = scenes().join("helix.json");
    let out = run(&["analyze", scene.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("frenet.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3,c,theta"));
    let mut n = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((cols[4] - 0.4).abs() < 1e-12 && (cols[5] + 0.2).abs() < 1e-12, "{line}");
        n += 1;
    }
    assert_eq!(n, 9);
}

#[test]
fn pseudosphere_curvature_grid() {
    let scene = scenes().join("pseudosphere.json");
    let out = run(&["analyze", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let k = report["results"].as_array().unwrap().iter().find(|r| r["op"] == "gauss_curvature").unwrap();
    let cols = k["table"]["columns"].as_array().unwrap();
    let kcol = cols.iter().position(|c| c == "K").unwrap();
    let rows = k["table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 400);
    for r in rows {
        assert!((r[kcol].as_f64().unwrap() + 1.0).abs() < 1e-6);
    }
}

#[test]
fn malformed_expression_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(
        dir.path(),
        r#"{"kind":"curve","components":["cos(t)","sin(t) +* 2","t"],"variables":["t"],"domain":[[0,1]],"requests":[]}"#,
    );
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("components[1]") && err.contains("byte 8"), "{err}");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(dir.path(), r#"{"kind":"curve","components":["t","t","t"],"variables":["t"],"domain":[[0,"x"]],"requests":[]}"#);
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain[0][1]"));

    let p = write_scene(dir.path(), r#"{"kind":"curve","components":["t","t","t"],"variables":["t"],"domain":[[0,1]],"requests":[{"op":"gauss_curvature","params":{}}]}"#);
    assert_eq!(run(&["analyze", &p]).status.code(), Some(2));

    let p = write_scene(dir.path(), r#"{"schema_version":99,"kind":"curve","components":["t","t","t"],"variables":["t"],"domain":[[0,1]],"requests":[]}"#);
    assert_eq!(run(&["analyze", &p]).status.code(), Some(2));

    assert_eq!(run(&["analyze", "/definitely/not/here.json"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3_with_point() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(
        dir.path(),
        r#"{"kind":"surface","components":["cos(u)*cos(v)","cos(u)*sin(v)","sin(u)"],"variables":["u","v"],"domain":[[-1,1],[0,6]],
            "requests":[{"op":"geodesic","params":{"u":0.9,"v":0,"du":1,"dv":0,"s_max":2}}]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&["analyze", &p, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    let point = report["diagnostics"]["failure"]["point"].as_array().unwrap();
    assert_eq!(point.len(), 2);
}

#[test]
fn reports_are_byte_identical() {
    for name in ["helix.json", "pseudosphere.json", "spherical.json", "tensor_job.json"] {
        let scene = scenes().join(name);
        let cmd = if name == "tensor_job.json" { "tensor" } else { "analyze" };
        let a = run(&[cmd, scene.to_str().unwrap(), "--grid", "7"]);
        let b = run(&[cmd, scene.to_str().unwrap(), "--grid", "7"]);
        assert_eq!(a.status.code(), Some(0), "{name}");
        assert_eq!(a.stdout, b.stdout, "{name}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn report_round_trips() {
    let scene = scenes().join("spherical.json");
    let out = run(&["analyze", scene.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = tensorgeo::cli::report::Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
}

#[test]
fn reconstruct_and_check() {
    let profile = scenes().join("helix_profile.json");
    let out = run(&["reconstruct", profile.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["results"][0];
    assert!(r["frame_drift"].as_f64().unwrap() < 1e-9);
    assert!((r["midpoint"]["curvature"].as_f64().unwrap() - 0.4).abs() < 1e-5);

    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn tensor_subcommand_needs_tensor_job() {
    let scene = scenes().join("helix.json");
    assert_eq!(run(&["tensor", scene.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "x.json", "--grid", "1"]).status.code(), Some(2));
}
