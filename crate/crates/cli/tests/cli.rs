use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn ltype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltype")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 output")
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` line in\n{text}"))
}

#[test]
fn delone_of_hexagonal_form() {
    let o = ltype(&["delone", "--form", data("a2.qf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# ltype delone seed 0 "));
    assert_eq!(field(&s, "cells"), "2");
    assert_eq!(field(&s, "mu"), "2/3");
    let theta: f64 = field(&s, "theta").parse().unwrap();
    assert!((theta - 1.209199).abs() < 1e-6);
}

#[test]
fn enumerate_diagonal_forms() {
    let o = ltype(&["enumerate", "--subspace", data("diag2.tsp").to_str().unwrap(), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "status"), "complete");
    assert_eq!(field(&s, "representatives"), "1");
    assert_eq!(field(&s, "dead_ends"), "2");
}

#[test]
fn thinfield_cyclic_cubic() {
    let o = ltype(&["thinfield", "--field", data("k169.nf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "verdict"), "not_thin");
    assert_eq!(field(&s, "cones"), "7");
    assert_eq!(field(&s, "t_ratio"), "27/169");
}

#[test]
fn output_is_deterministic() {
    let args = ["thinfield", "--fixture", "49", "--seed", "3", "--threads", "2"];
    let a = ltype(&args);
    let b = ltype(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = ltype(&["thinfield", "--fixture", "49", "--seed", "3", "--threads", "1"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn certificates_round_trip() {
    let dir = std::env::temp_dir().join(format!("ltype-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("k8.txt");
    let o = ltype(&["thinfield", "--fixture", "8", "--verify", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = ltype(&["verify", "--certificates", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    let s = stdout(&v);
    assert!(s.lines().any(|l| l.starts_with("verified ") && l.ends_with(" of 1")), "{s}");
    assert!(!s.contains("FAIL"));

    let text = std::fs::read_to_string(&out).unwrap();
    let upper = field(&text, "upper").to_string();
    let tampered = text.replacen(&format!("\nupper {upper}\n"), "\nupper 1/1000\n", 1);
    assert_ne!(tampered, text);
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, tampered).unwrap();
    let v = ltype(&["verify", "--certificates", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn partial_run_exits_with_two() {
    let o = ltype(&["thinfield", "--fixture", "169", "--max-cones", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert_eq!(field(&s, "status"), "partial");
    assert_eq!(field(&s, "verdict"), "inconclusive");
}

#[test]
fn json_report_parses() {
    let o = ltype(&["delone", "--form", data("a2.qf").to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("valid json");
    assert_eq!(v["command"], "delone");
    assert_eq!(v["partial"], false);
    assert!(v["result"].is_object());
}

#[test]
fn config_overrides_flags() {
    let dir = std::env::temp_dir().join(format!("ltype-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "seed = 9\nmax_cones = 5\n").unwrap();
    let o = ltype(&["catalog", "--list", "--seed", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# ltype catalog seed 9 max_cones 5 "));
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let o = ltype(&["catalog", "--list", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_input_fails() {
    let o = ltype(&["delone", "--form", "/nonexistent/form.qf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}
