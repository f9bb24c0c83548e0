use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whitney-dq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn star_prints_the_series() {
    let o = run(&["star", "x1", "x2", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("x1*x2 + (-1/2*i)*h"));
    let o = run(&["star", "1", "x1^2 + x2", "--format", "text"]);
    assert_eq!(stdout(&o).lines().next(), Some("x2 + x1^2"));
}

#[test]
fn curved_star_has_the_bracket_at_first_order() {
    let o = run(&["star", "x1", "x2", "--connection", "curved-linear-n1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"][0], "x1*x2");
    let o = run(&["star", "x2", "x1", "--connection", "curved-linear-n1", "--format", "json"]);
    let w: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"][1], "(-1/2*i)");
    assert_eq!(w["coefficients"][1], "(1/2*i)");
}

#[test]
fn parse_errors_exit_two() {
    let o = run(&["star", "x1 + * y1", "x2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "derham", "--format", "text", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("star_involution: pass"));
    let o = run(&["verify", "weyl", "--trials", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["trials"], 3);
    assert!(v["version"].is_string());
}

#[test]
fn invalid_configuration_exits_two() {
    let dir = std::env::temp_dir().join(format!("whitney-dq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("singular.json");
    std::fs::write(&bad, r#"{"dim": 2, "pi": [["0", "0"], ["0", "0"]], "gamma": []}"#).unwrap();
    let o = run(&["verify", "weyl", "--connection", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"seed": 3, "trials": 2, "format": "text"}"#).unwrap();
    let o = run(&["verify", "weyl", "--config", cfg.to_str().unwrap(), "--seed", "4"]);
    assert!(stdout(&o).contains("seed 4"));
}

#[test]
fn homology_tables() {
    let o = run(&["homology", "--subset", "point", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["betti"]["de_rham"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["duality_holds"], true);
    let o = run(&["homology", "--subset", "two-points", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["betti"]["de_rham"], serde_json::json!([2, 0, 0]));
    let o = run(&["homology", "--jet-order", "1", "--hbar-order", "1", "--hochschild", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hochschild"][0]["rows"][0]["homology_dim"], 4);
    assert_eq!(v["hochschild"][1]["rows"][0]["homology_dim"], 3);
    assert_eq!(v["hochschild"][1]["caveat"], true);
    let o = run(&["homology", "--hochschild", "2"]);
    assert_eq!(o.status.code(), Some(2));
}
