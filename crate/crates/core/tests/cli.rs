use std::path::Path;
use std::process::{Command, Output};

use richter::cubature::CubatureRule;
use richter::io::{measure_to_csv, measure_to_json, parse_cloud, read_json};
use richter::mvt::MvtCertificate;
use richter::{discretize, SamplerSpec};

fn richter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_richter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_is_byte_stable() {
    let a = richter(&["demo-paper-example"]);
    let b = richter(&["demo-paper-example"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("lambda = 0.500000000000"));
    assert!(text.contains("f(x0) = 1"));
    assert!(text.contains("f(x1) = 2"));
}

#[test]
fn compress_writes_a_small_rule() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rule.json");
    let o = richter(&["compress", "--grid", "32x32", "--box", "0,1,0,1", "--degree", "2", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rule: CubatureRule = read_json(&out).unwrap();
    assert!(rule.nodes.len() <= 6);
    assert!(rule.moment_residual <= 1e-9);
    assert!(rule.source.cloud_sha256.len() == 64);
}

#[test]
fn mvt_certificate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = richter(&["mvt", "--grid", "100", "--box", "0,1", "--function", "x^2", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: MvtCertificate = read_json(&out).unwrap();
    let f = |x: f64| x * x;
    let combo = cert.lambda * f(cert.x0.coords()[0]) + (1.0 - cert.lambda) * f(cert.x1.coords()[0]);
    assert!((combo - cert.mean).abs() <= 1e-12);
}

#[test]
fn step_function_has_no_one_point_witness() {
    let o = richter(&["mvt1d", "--box", "0,1", "--function", "step(1/2, 1, 2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no one-point witness"), "{}", stderr(&o));
    let ok = richter(&["mvt1d", "--box", "0,1", "--function", "x"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        vec!["compress", "--grid", "10", "--box", "0,1", "--degree", "x"],
        vec!["mvt", "--grid", "10", "--box", "0,1", "--function", "x +* 2"],
        vec!["compress", "--grid", "10", "--mc", "10", "--box", "0,1"],
        vec!["compress", "--grid", "10", "--box", "1,0"],
        vec!["compress", "--input", "/definitely/not/here.csv"],
        vec!["no-such-command"],
    ] {
        let o = richter(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn negative_weight_cites_its_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.csv");
    std::fs::write(&path, "x1,w\n0.25,-0.5\n0.75,1\n").unwrap();
    let o = richter(&["compress", "--input", path_str(&path), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));
}

#[test]
fn negative_density_is_a_domain_error() {
    let o = richter(&["compress", "--grid", "10", "--box", "0,1", "--density", "x - 1/2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn verify_pipeline_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let cloud_path = dir.path().join("cloud.json");
    let rule_path = dir.path().join("rule.json");
    let report_path = dir.path().join("report.json");

    let sampler = SamplerSpec::monte_carlo(500, 3, vec![(0.0, 1.0), (0.0, 2.0)]).unwrap();
    let cloud = discretize(|x| 1.0 + x[0] * x[1], &sampler).unwrap();
    std::fs::write(&cloud_path, measure_to_json(&cloud)).unwrap();

    let o = richter(&["compress", "--input", path_str(&cloud_path), "--degree", "3", "--out", path_str(&rule_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = richter(&[
        "verify", "--rule", path_str(&rule_path), "--input", path_str(&cloud_path),
        "--trials", "20", "--out", path_str(&report_path),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = read_json(&report_path).unwrap();
    assert!(report["basis_max_rel_err"].as_f64().unwrap() <= 1e-9);
    assert!(report["sampled_max_rel_err"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["trials"], 20);
}

#[test]
fn csv_and_json_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sampler = SamplerSpec::monte_carlo(50, 9, vec![(-1.0, 1.0); 3]).unwrap();
    let cloud = discretize(|x| x[0].exp(), &sampler).unwrap();
    for (name, text) in [("c.csv", measure_to_csv(&cloud)), ("c.json", measure_to_json(&cloud))] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        assert_eq!(parse_cloud(&path).unwrap(), cloud, "{name}");
    }
}
