use std::path::Path;
use std::process::{Command, Output};

use landauer_geo::Protocol;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landauer-geo"))
        .args(args)
        .env("LANDAUER_GEO_LOG", "error")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v["results"][key]["value"].as_f64().unwrap_or_else(|| panic!("no numeric result {key} in {v}"))
}

#[test]
fn metric_json_and_csv() {
    let v = json(&run(&["metric", "--eps", "-0.5", "--mu", "1", "--method", "high-t"]));
    assert_eq!(v["command"], "metric");
    assert_eq!(num(&v, "m_ee"), 0.125);
    assert_eq!(v["results"]["m_ee"]["method"], "high_t");
    assert!(v["version"].is_string() && v["timestamp"].is_string());
    let out = run(&["--format", "csv", "metric", "--mu", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("quantity,value,method\n"));
    assert!(text.lines().any(|l| l.starts_with("m_mm,")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["metric"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "xml", "metric", "--mu", "1"]).status.code(), Some(2));
    assert_eq!(run(&["metric", "--mu", "1", "--method", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["one-param", "--beta-mu-star", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["metric", "--mu", "0"]).status.code(), Some(3));
    assert_eq!(run(&["dynamics", "--protocol", "/nonexistent/p.json"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_protocol_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"tau": 1, "beta": 1, "knots": [0, 1], "eps": [0], "mu": [0, 0], "interpolation": "monotone-cubic"}"#,
    )
    .unwrap();
    let out = run(&["dynamics", "--protocol", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn one_param_grid_is_ordered_and_deterministic() {
    let a = run(&["--format", "csv", "one-param", "--grid", "0.01:100:9"]);
    let b = run(&["--format", "csv", "one-param", "--grid", "0.01:100:9"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let v = json(&run(&["one-param", "--beta-mu-star", "100"]));
    assert!((num(&v, "l2") - 0.8863).abs() < 1e-4);
}

#[test]
fn geodesic_then_dynamics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let proto = dir.path().join("g.json");
    let report = dir.path().join("g_report.json");
    let out = run(&[
        "--quiet",
        "--out",
        report.to_str().unwrap(),
        "geodesic",
        "--target-eps",
        "0.5",
        "--protocol-out",
        proto.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "--quiet with --out keeps stdout clean");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let sigma = num(&v, "sigma_tau");
    let p = Protocol::from_json(&std::fs::read_to_string(&proto).unwrap()).unwrap();
    assert!((p.end().eps - 0.5).abs() < 1e-6);
    // written samples read back bit for bit
    let again = Protocol::from_json(&p.to_json()).unwrap();
    assert_eq!(again.eps, p.eps);
    assert!(sigma > 0.0 && sigma < 2.58);
    assert!(Path::new(&proto).exists());
}

#[test]
fn dynamics_on_an_analytic_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("w.json");
    std::fs::write(
        &p,
        r#"{"tau": 2.0, "beta": 1.0, "knots": [0.0, 1.0], "eps": [0.0, 3.0], "mu": [0.3, 0.3],
            "interpolation": "analytic:weak_optimal(beta=1,mu_star=0.3,eps_final=3)"}"#,
    )
    .unwrap();
    let out = run(&["--format", "csv", "dynamics", "--protocol", p.to_str().unwrap(), "--rows", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,eps,mu,p,v,speed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let p: f64 = r.split(',').nth(3).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn validate_passes() {
    let out = run(&["validate"]);
    assert!(String::from_utf8_lossy(&out.stderr).lines().all(|l| l.starts_with("PASS ")));
    let v = json(&out);
    assert_eq!(v["command"], "validate");
    assert!(v["diagnostics"]["failed"].as_u64() == Some(0), "{}", v["diagnostics"]);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let go = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_landauer-geo"))
            .args(["one-param", "--grid", "0.1:10:5"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        (v["results"].clone(), v["samples"].clone())
    };
    assert_eq!(go("1"), go("4"));
}
