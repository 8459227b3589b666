use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const RATES: [&str; 4] = ["--gamma-c", "0.4", "--kappa", "0.8"];

fn squeeze(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_rates<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&RATES);
    v.extend_from_slice(extra);
    v
}

fn json_ok(args: &[&str]) -> Value {
    let out = squeeze(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Exit code plus the parsed single-line error object.
fn failure(args: &[&str]) -> (i32, Value) {
    let out = squeeze(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    let err: Value = serde_json::from_str(stderr.trim_end()).unwrap();
    let code = out.status.code().unwrap();
    assert_eq!(err["exit_code"].as_i64().unwrap(), code as i64);
    (code, err)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn steady_reports_squeezing() {
    let v = json_ok(&with_rates("steady", &["--epsilon", "0.2"]));
    assert!((f(&v["mode"]["squeezing"]) - 0.5).abs() <= 1e-12);
    assert!((f(&v["atom"]["eta_a"]) - 0.25).abs() <= 1e-15);
    let v = json_ok(&with_rates("steady", &["--epsilon", "0"]));
    assert_eq!(f(&v["mode"]["squeezing"]), 0.0);
}

#[test]
fn steady_resolves_drive_from_lambda_beta() {
    let v = json_ok(&with_rates("steady", &["--lambda", "2", "--beta", "0.1"]));
    assert!((f(&v["params"]["epsilon"]) - 0.2).abs() <= 1e-15);
    assert!((f(&v["mode"]["squeezing"]) - 0.5).abs() <= 1e-12);
    let (code, _) = failure(&with_rates("steady", &["--lambda", "2", "--beta", "0.1", "--epsilon", "0.3"]));
    assert_eq!(code, 2);
}

#[test]
fn superpose_reports_split_squeezing() {
    let v = json_ok(&with_rates("superpose", &["--epsilon", "0.2"]));
    assert!((f(&v["superposed"]["s_plus"]) - 0.25).abs() <= 1e-12);
    assert!((f(&v["superposed"]["sum"]) - 0.5).abs() <= 1e-12);
    let v = json_ok(&with_rates("superpose", &["--epsilon", "0"]));
    for key in ["s_plus", "s_minus", "sum"] {
        assert_eq!(f(&v["superposed"][key]), 0.0);
    }
}

#[test]
fn superposed_photons_double_across_commands() {
    for eps in ["0.05", "0.2", "0.9"] {
        let s = json_ok(&with_rates("steady", &["--epsilon", eps]));
        let c = json_ok(&with_rates("superpose", &["--epsilon", eps]));
        let n = f(&s["mode"]["n_bar"]);
        assert!((f(&c["superposed"]["n_bar_sup"]) - 2.0 * n).abs() <= 1e-12 * n);
    }
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect()
}

#[test]
fn dynamics_reaches_closed_form() {
    let out = squeeze(&with_rates("dynamics", &["--epsilon", "0.2", "--sample-stride", "1000"]));
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("t,sigma_re,sigma_im,eta_a,eta_b"));
    let row = last_row(&csv);
    assert!((row[1] - 0.353_553_390_593_273_8).abs() <= 1e-8);
    assert!((row[3] - 0.25).abs() <= 1e-8 && (row[4] - 0.75).abs() <= 1e-8);
}

#[test]
fn dynamics_undriven_rows_constant() {
    let out = squeeze(&with_rates("dynamics", &["--epsilon", "0"]));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(!rows.is_empty());
    for r in rows {
        assert!(r.ends_with(",0.000000000000e+00,0.000000000000e+00,0.000000000000e+00,1.000000000000e+00"));
    }
}

#[test]
fn dynamics_short_horizon_exits_3() {
    let (code, err) = failure(&with_rates("dynamics", &["--epsilon", "0.2", "--t-max", "0.5"]));
    assert_eq!(code, 3);
    assert_eq!(err["error"], "non_convergence");
}

#[test]
fn oracle_undriven_matches_populations() {
    let v = json_ok(&with_rates("oracle", &["--epsilon", "0"]));
    assert_eq!(f(&v["oracle"]["mean_photons"]), 0.0);
    assert!(f(&v["delta"]["eta_a"]).abs() <= 1e-12);
    assert!(f(&v["delta"]["eta_b"]).abs() <= 1e-12);
}

#[test]
fn oracle_decoupled_limit() {
    let v = json_ok(&["oracle", "--g", "0", "--kappa", "0.8", "--epsilon", "0.2"]);
    assert!((f(&v["oracle"]["mean_photons"]) - 0.25).abs() <= 1e-8);
    assert_eq!(v["reference_kind"], "decoupled_coherent_state");
}

#[test]
fn oracle_full_model_reports_differences() {
    let v = json_ok(&with_rates("oracle", &["--epsilon", "0.2"]));
    for key in ["mean_photons", "a_mean", "a_sq", "eta_a", "eta_b", "sigma", "var_plus", "var_minus"] {
        assert!(v["oracle"].get(key).is_some() && v["reference"].get(key).is_some());
        assert!(v["delta"].get(key).is_some(), "{key}");
    }
    assert!(f(&v["residual"]) <= 1e-10);
    assert!(v["cutoff_history"].as_array().unwrap().len() >= 2);
}

#[test]
fn oracle_dimension_cap_exits_4() {
    let (code, err) = failure(&with_rates("oracle", &["--epsilon", "0.2", "--n-cut", "200"]));
    assert_eq!(code, 4);
    assert_eq!(err["error"], "dimension_cap");
    let (code, _) = failure(&with_rates("oracle", &["--epsilon", "0.2", "--dim-cap", "20"]));
    assert_eq!(code, 4);
}

#[test]
fn config_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["steady", "--g", "0.3", "--gamma-c", "0.4", "--kappa", "0.8", "--epsilon", "0.2"],
        vec!["steady", "--gamma-c", "0.4", "--epsilon", "0.2"],
        vec!["steady", "--gamma-c", "0.4", "--kappa", "0.8"],
        vec!["steady", "--gamma-c", "0.4", "--kappa", "-1", "--epsilon", "0.2"],
        vec!["steady", "--gamma-c", "0.4", "--kappa", "0.8", "--epsilon", "-0.1"],
        vec!["steady", "--nope"],
        vec!["bogus"],
        vec!["steady", "--gamma-c", "0.4", "--kappa", "0.8", "--epsilon", "0.2", "--format", "csv"],
    ];
    for args in cases {
        let (code, err) = failure(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(err["error"], "config");
    }
}

#[test]
fn consistent_g_and_gamma_c_accepted() {
    let v = json_ok(&["steady", "--g", "0.28284271247461906", "--gamma-c", "0.4", "--kappa", "0.8", "--epsilon", "0.2"]);
    assert!((f(&v["mode"]["squeezing"]) - 0.5).abs() <= 1e-12);
}

#[test]
fn config_file_supplies_flags_and_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, r#"{"gamma_c": 0.4, "kappa": 0.8, "epsilon": 0.1}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json_ok(&["steady", "--config", p]);
    assert!((f(&v["mode"]["squeezing"]) - 0.32).abs() <= 1e-12);
    let v = json_ok(&["steady", "--config", p, "--epsilon", "0.2"]);
    assert!((f(&v["mode"]["squeezing"]) - 0.5).abs() <= 1e-12);

    fs::write(&path, r#"{"gamma_c": 0.4, "kapa": 0.8}"#).unwrap();
    assert_eq!(failure(&["steady", "--config", p]).0, 2);
    assert_eq!(failure(&["steady", "--config", "/nonexistent/run.json"]).0, 2);
}

#[test]
fn json_round_trips_losslessly() {
    let v = json_ok(&with_rates("steady", &["--epsilon", "0.123456789"]));
    let text = serde_json::to_string(&v).unwrap();
    let again: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(f(&again["params"]["epsilon"]).to_bits(), 0.123456789f64.to_bits());
    assert_eq!(again, v);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("steady.json");
    let out = squeeze(&with_rates("steady", &["--epsilon", "0.2", "--out", path.to_str().unwrap()]));
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["mode"].get("squeezing").is_some());
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn figures_deterministic_with_small_residuals() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = squeeze(&["figures", "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (fa, fb) = (read_all(a.path()), read_all(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["fig2.csv", "fig3.csv", "fig4.csv", "identities.csv", "summary.json"]);
    assert_eq!(fa, fb);

    let ids = String::from_utf8(fa[3].1.clone()).unwrap();
    let max = ids
        .lines()
        .skip(1)
        .flat_map(|l| {
            let cols: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [cols[3], cols[6]]
        })
        .fold(0.0f64, f64::max);
    assert!(max <= 1e-12);
    assert!(!ids.contains('\r'));
}
