use std::process::{Command, Output};

use serde_json::Value;

fn heightlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightlab"))
        .args(args)
        .env_remove("HEIGHTLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = heightlab(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> Option<i32> {
    heightlab(args).status.code()
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    v.as_f64().is_some_and(|y| (y - x).abs() <= tol)
}

#[test]
fn envelope_shape() {
    let v = json(&["mahler", "T-2"]);
    assert_eq!(v["command"], "mahler");
    assert_eq!(v["inputs"]["poly"], "T-2");
    assert!(v["warnings"].as_array().unwrap().is_empty());
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn mahler_examples() {
    let v = json(&["mahler", "T-2"]);
    assert!(close(&v["results"]["log_mahler"], std::f64::consts::LN_2, 1e-15));
    let v = json(&["mahler", "T"]);
    assert_eq!(v["results"]["log_mahler"].as_f64(), Some(0.0));

    let v = json(&["mahler", "x0+x1+x2", "--grid", "1024"]);
    let r = &v["results"];
    assert_eq!(r["method"], "quadrature");
    let est = r["log_mahler"].as_f64().unwrap();
    let err = r["error_estimate"].as_f64().unwrap();
    assert!(err < 1e-6);
    // the same integral on the coarser grid differs by about the reported error
    let coarse = json(&["mahler", "x0+x1+x2", "--grid", "512"]);
    let c = coarse["results"]["log_mahler"].as_f64().unwrap();
    assert!((c - est).abs() <= coarse["results"]["error_estimate"].as_f64().unwrap() + 1e-15);
}

#[test]
fn mahler_univariate_with_quadrature_check() {
    let v = json(&["mahler", "T^3-T-1", "--grid", "512"]);
    let r = &v["results"];
    assert_eq!(r["method"], "roots");
    let q = r["quadrature"]["estimate"].as_f64().unwrap();
    assert!(close(&r["log_mahler"], q, 1e-8));
    assert!(v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn padic_examples() {
    let v = json(&["local-integral", "(T^5-1)*(T-2)+3", "--at", "2", "-p", "3"]);
    assert_eq!(v["results"]["coefficient_of_log_p"], "1/6");
    assert!(close(&v["results"]["value"], 3f64.ln() / 6.0, 1e-15));

    let v = json(&["newton-polygon", "T^2-3", "-p", "3"]);
    let segs = v["results"]["segments"].as_array().unwrap();
    assert_eq!(segs.len(), 1);
    assert_eq!(segs[0]["slope"], "-1/2");
    assert_eq!(segs[0]["width"], 2);
}

#[test]
fn height_breakdown() {
    let v = json(&["height", "2*T-1"]);
    let r = &v["results"];
    assert!(close(&r["total"], std::f64::consts::LN_2, 1e-15));
    assert_eq!(r["finite"][0]["p"], 2);
    assert_eq!(r["finite"][0]["coefficient_of_log_p"], "1");
    assert!(close(&r["arch"], 0.0, 1e-15));
}

#[test]
fn canonical_height_preperiodic() {
    let v = json(&["canonical-height", "T", "-c", "-1"]);
    assert_eq!(v["results"]["total"].as_f64(), Some(0.0));
    assert_eq!(v["results"]["preperiodic"], true);
}

#[test]
fn experiment_empty_range() {
    let v = json(&["experiment", "autissier", "--n-max", "0"]);
    assert!(v["results"]["rows"].as_array().unwrap().is_empty());
    assert!(v["results"]["gap_series"].as_array().unwrap().is_empty());
}

#[test]
fn experiment_csv_columns() {
    let out = heightlab(&["experiment", "autissier", "--n-max", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,degree,height,empirical_inf,equilibrium_inf,empirical_3,equilibrium_3,gap,predicted_limit"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    let last: Vec<&str> = rows[3].split(',').collect();
    assert_eq!(last[0], "4");
    assert_eq!(last[1], "5");
    // 3-adic empirical integral is log 3 / (n + 1)
    let e3: f64 = last[5].parse().unwrap();
    assert!((e3 - 3f64.ln() / 5.0).abs() < 1e-15);
}

#[test]
fn experiment_equidist_gap() {
    let v = json(&["experiment", "equidist", "--family", "T^n-2", "--divisor", "T-1", "--n-max", "20"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows {
        let n = r["n"].as_f64().unwrap();
        assert!(r["gap"].as_f64().unwrap().abs() <= std::f64::consts::LN_2 / n + 1e-9);
        assert!(r["flags"].as_array().unwrap().is_empty());
    }
}

#[test]
fn experiment_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    let out = heightlab(&["experiment", "equidist", "--n-max", "3", "-o", p]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&["mahler", "2T"]), Some(2));
    assert_eq!(code(&["mahler", "T+y", "--vars", "T"]), Some(2));
    assert_eq!(code(&["height", "0"]), Some(2));
    assert_eq!(code(&["newton-polygon", "T^2-3", "-p", "4"]), Some(2));
    assert_eq!(code(&["local-integral", "T", "--at", "1/0", "-p", "3"]), Some(2));
    assert_eq!(code(&["experiment", "equidist", "--family", "T^n-", "--n-max", "2"]), Some(2));
    assert_eq!(code(&["experiment", "equidist", "--places", "inf,6"]), Some(2));
    assert_eq!(code(&["experiment", "nosuch"]), Some(2));
    assert_eq!(code(&["--threads", "0", "mahler", "T"]), Some(2));
    assert_eq!(code(&["mahler", "x0+x1", "--grid", "100"]), Some(2));
}

#[test]
fn numeric_failures_exit_3() {
    assert_eq!(code(&["canonical-height", "T^2+1", "-c", "0", "--max-iterations", "3"]), Some(3));
}

#[test]
fn error_message_on_stderr() {
    let out = heightlab(&["mahler", "T^-1"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["experiment", "autissier", "--n-max", "30"];
    let base = heightlab(&[&["--threads", "1"][..], &args[..]].concat()).stdout;
    for t in ["2", "4", "7"] {
        let other = heightlab(&[&["--threads", t][..], &args[..]].concat()).stdout;
        assert_eq!(base, other, "threads = {t}");
    }
    let quad = ["mahler", "x0+2*x1+x2*x0", "--grid", "256"];
    let a = heightlab(&[&["--threads", "1"][..], &quad[..]].concat()).stdout;
    let b = heightlab(&[&["--threads", "5"][..], &quad[..]].concat()).stdout;
    assert_eq!(a, b);
}

#[test]
fn thread_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_heightlab"))
        .args(["mahler", "T-2"])
        .env("HEIGHTLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_heightlab"))
        .args(["--threads", "2", "mahler", "T-2"])
        .env("HEIGHTLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
