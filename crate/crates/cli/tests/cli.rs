use serde_json::Value;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ritt-calc"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut c = bin();
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    let o = c.output().expect("binary runs");
    Run {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}\n{}", r.stdout, r.stderr))
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ritt-calc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn shift(n: usize) -> String {
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == (j + 1) % n { 1.0 } else { 0.0 }).collect()).collect();
    serde_json::json!({"n": n, "re": rows}).to_string()
}

fn diag(ev: &[(f64, f64)]) -> String {
    let n = ev.len();
    let re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { ev[i].0 } else { 0.0 }).collect()).collect();
    let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { ev[i].1 } else { 0.0 }).collect()).collect();
    serde_json::json!({"n": n, "re": re, "im": im}).to_string()
}

#[test]
fn analyze_identity() {
    let m = tmp("id.json", r#"{"n":2,"re":[[1,0],[0,1]]}"#);
    let r = run(&["analyze", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    let rep = &v["report"];
    assert_eq!(f(&rep["power"]["power_bound"]), 1.0);
    assert_eq!(f(&rep["power"]["ritt_ratio"]), 0.0);
    assert_eq!(f(&rep["stolz_type"]["sigma"]), 1.0);
}

#[test]
fn analyze_minus_one_sets_growth_flag() {
    let m = tmp("m1.json", r#"{"n":1,"re":[[-1]]}"#);
    let r = run(&["analyze", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["report"]["power"]["growth_flag"], Value::Bool(true));
    assert_eq!(v["report"]["spectral_flags"]["minus_one_in_spectrum"], Value::Bool(true));
    assert_eq!(v["report"]["stolz_type"]["sigma"], Value::String("inf".into()));
}

#[test]
fn analyze_angle_growth_matrix() {
    let dir = std::env::temp_dir().join(format!("ritt-calc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("growth.json");
    let r = run(&["demo-angle-growth", "--phi", &(PI / 6.0).to_string(), "--delta", "0.5", "--n", "64", "--emit-matrix", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["analyze", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let a = f(&json(&r)["report"]["minimal_angle"]);
    assert!((a - PI / 6.0).abs() < 1e-6, "{a}");
}

#[test]
fn output_is_deterministic() {
    let m = tmp("det.json", &diag(&[(0.5, 0.2), (0.9, -0.05), (0.1, 0.0)]));
    let a = run(&["analyze", s(&m)]);
    let b = run_env(&["analyze", s(&m)], &[("RITT_CALC_THREADS", "1")]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "all"]);
    let b = run_env(&["verify", "all"], &[("RITT_CALC_THREADS", "1")]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_2() {
    let bad = tmp("bad.json", "{\"n\":2,\n\"re\":[[1,2],[3,4]],\n\"im\": oops}");
    let r = run(&["analyze", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let ns = tmp("ns.json", r#"{"n":2,"re":[[1,2],[3]]}"#);
    let r = run(&["analyze", s(&ns)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not square"), "{}", r.stderr);
    assert_eq!(run(&["analyze", "/nonexistent/m.json"]).code, 2);
    let id = tmp("id2.json", r#"{"n":1,"re":[[0.5]]}"#);
    assert_eq!(run(&["--tol", "0", "analyze", s(&id)]).code, 2);
    assert_eq!(run(&["--radii", "0.5", "analyze", s(&id)]).code, 2);
    assert_eq!(run(&["verify", "nope"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    let r = run_env(&["verify", "appendix_a"], &[("RITT_CALC_THREADS", "zero")]);
    assert_eq!(r.code, 2);
}

#[test]
fn apply_identity_series_echoes_t() {
    let t = tmp("t.json", &diag(&[(0.5, 0.2), (0.9, -0.05)]));
    let h = tmp("ident.json", r#"{"kind":"convex","coeffs":[0,1]}"#);
    let r = run(&["apply", s(&t), s(&h)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let v = json(&r);
    assert_eq!(v["pass"], Value::Bool(true));
    let m = &v["result"]["matrix"];
    assert!((f(&m["re"][0][0]) - 0.5).abs() < 1e-14 && (f(&m["im"][0][0]) - 0.2).abs() < 1e-14);
    assert!((f(&m["re"][1][1]) - 0.9).abs() < 1e-14 && (f(&m["im"][1][1]) + 0.05).abs() < 1e-14);
    assert_eq!(v["checks"][0]["kind"], "subordination");
}

fn clause<'a>(v: &'a Value, kind: &str, name: &str) -> &'a Value {
    let c = v["checks"].as_array().unwrap().iter().find(|c| c["kind"] == kind).unwrap_or_else(|| panic!("no {kind} check"));
    c["clauses"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn apply_h_half_on_cyclic_shift() {
    let t = tmp("shift.json", &shift(8));
    let h = tmp("h.json", r#"{"kind":"named","family":"h_alpha","alpha":0.5}"#);
    let r = run(&["apply", s(&t), s(&h)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let v = json(&r);
    let c = clause(&v, "improving", "angle_vs_covering_sector");
    assert_eq!(c["pass"], Value::Bool(true));
    assert!(f(&c["value"]) <= PI / 4.0 + 1e-6);
    assert!(!v["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn apply_h_half_on_stolz_diagonal() {
    // eigenvalues with |1 − z|/(1 − |z|) < 2
    let t = tmp("stolz.json", &diag(&[(0.5, 0.1), (0.8, 0.05), (0.9, -0.03), (0.2, 0.0)]));
    let h = tmp("h2.json", r#"{"kind":"named","family":"h_alpha","alpha":0.5}"#);
    let r = run(&["apply", s(&t), s(&h)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let v = json(&r);
    assert_eq!(clause(&v, "subordination", "stolz_spectral")["pass"], Value::Bool(true));
}

#[test]
fn apply_rejections() {
    let t = tmp("t2.json", &diag(&[(0.5, 0.0)]));
    let h = tmp("irregular.json", r#"{"kind":"hausdorff","nu":{"points":[0.5],"weights":[0.1]}}"#);
    let r = run(&["apply", s(&t), s(&h)]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.stderr.contains("regularity"), "{}", r.stderr);
    let big = tmp("big.json", &diag(&[(1.5, 0.0)]));
    let g = tmp("g.json", r#"{"kind":"convex","coeffs":[0.5,0.5]}"#);
    let r = run(&["apply", s(&big), s(&g)]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.stderr.contains("not power bounded"), "{}", r.stderr);
    let ge = tmp("geps.json", r#"{"kind":"named","family":"g_eps","eps":0.5}"#);
    assert_eq!(run(&["apply", s(&t), s(&ge)]).code, 2);
}

#[test]
fn improve_check_named_families() {
    for (spec, reference) in [
        (r#"{"kind":"named","family":"h_alpha","alpha":0.5}"#, PI / 4.0),
        (r#"{"kind":"named","family":"h_eps","eps":0.3}"#, 0.15 * PI),
        (r#"{"kind":"named","family":"zeta_L","alpha":0.5}"#, PI / 4.0),
    ] {
        let p = tmp("fam.json", spec);
        let r = run(&["improve-check", s(&p)]);
        assert_eq!(r.code, 0, "{spec}: {}\n{}", r.stdout, r.stderr);
        let v = json(&r);
        assert!((f(&v["reference_angle"]) - reference).abs() < 1e-15);
        assert!(f(&v["gamma_hat"]) <= reference + 1e-6);
        assert_eq!(v["sampling"]["samples"], 100_000);
    }
}

#[test]
fn verify_suites_and_csv() {
    let r = run(&["verify", "appendix_a"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = json(&r);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["pass"] == Value::Bool(true)));
    let r = run(&["--format", "csv", "verify", "measures"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("suite,name,pass,samples"), "{}", r.stdout);
    let m = tmp("csv.json", r#"{"n":1,"re":[[0.5]]}"#);
    let r = run(&["--format", "csv", "--grid-nodes", "8", "analyze", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("z_re,z_im,radius,value\n"));
    let h = tmp("hcsv.json", r#"{"kind":"named","family":"h_alpha","alpha":0.5}"#);
    assert_eq!(run(&["--format", "csv", "improve-check", s(&h)]).code, 2);
}

#[test]
fn out_flag_writes_file() {
    let m = tmp("o.json", r#"{"n":1,"re":[[0.25]]}"#);
    let out = m.with_file_name("report.json");
    let r = run(&["--out", s(&out), "analyze", s(&m)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "analyze");
}

#[test]
fn apply_stieltjes_routes_by_representation() {
    let t = tmp("t3.json", &diag(&[(0.5, 0.1), (0.8, 0.0)]));
    let pure = tmp("st0.json", r#"{"kind":"stieltjes","mu":{"points":[2.0],"weights":[1.0]}}"#);
    let r = run(&["apply", s(&t), s(&pure)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    assert_eq!(json(&r)["checks"][0]["kind"], "improving");
    let drift = tmp("st1.json", r#"{"kind":"stieltjes","b":1.0,"mu":{"points":[2.0],"weights":[1.0]}}"#);
    let r = run(&["apply", s(&t), s(&drift)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("neither"), "{}", r.stderr);
}
