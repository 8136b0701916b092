use std::io::Write;
use std::process::{Command, Output};

fn frobenius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobenius")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn coeffs_rows() {
    let o = frobenius(&["coeffs", "--preset", "anharmonic:c=0", "--branch", "minus", "--m-max", "9", "--digits", "50"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("m,sign,log10_abs\n0,1,0\n"));
    let r = rows(&o);
    assert_eq!(r.len(), 10);
    assert!((r[3][2].parse::<f64>().unwrap() + 1.4771).abs() < 1e-4);

    let zero = frobenius(&["coeffs", "--preset", "anharmonic:c=0", "--m-max", "0"]);
    assert_eq!(stdout(&zero), "m,sign,log10_abs\n0,1,0\n");
}

#[test]
fn double_well_coefficients_oscillate() {
    let o = frobenius(&["coeffs", "--preset", "doublewell:c=2", "--m-max", "200"]);
    let signs: Vec<i32> = rows(&o).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(signs.windows(2).filter(|w| w[0] * w[1] < 0).count() > 10);
}

#[test]
fn compare_pred1_and_summary() {
    let o = frobenius(&["compare", "--preset", "anharmonic:c=0", "--method", "pred1", "--m-min", "30", "--m-max", "1000"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("m,log_abs_exact,log_abs_estimate,difference\n"));
    for r in rows(&o) {
        assert!(r[3].parse::<f64>().unwrap().abs() <= 1.0, "{r:?}");
    }
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("max_abs_difference=") && err.contains("slope_vs_ln_m="), "{err}");
}

#[test]
fn compare_pred0_slope() {
    let o = frobenius(&["compare", "--preset", "anharmonic:c=0", "--method", "pred0", "--m-min", "30", "--m-max", "1000"]);
    let err = String::from_utf8(o.stderr).unwrap();
    let slope: f64 = err.split("slope_vs_ln_m=").nth(1).unwrap().trim().parse().unwrap();
    assert!((slope + 5.0 / 6.0).abs() <= 0.1 * 5.0 / 6.0, "{slope}");
}

#[test]
fn compare_double_well_envelope() {
    let o = frobenius(&["compare", "--preset", "doublewell:c=2", "--method", "parametric", "--m-min", "20", "--m-max", "300", "--window", "6"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 281);
    assert!(r.iter().all(|r| r[3].parse::<f64>().unwrap().abs() < 8.0));
}

#[test]
fn plan_json() {
    let o = frobenius(&["plan", "--preset", "anharmonic:c=0", "--x", "100", "--precision", "100"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["M"].as_u64().unwrap() as f64;
    assert!((m - 1700.0).abs() < 0.1 * 1700.0);
    assert!((v["working_digits"].as_u64().unwrap() as i64 - 255).abs() <= 5);
    assert_eq!(v["P"], 100);
}

#[test]
fn evaluate_matches_reference() {
    let o = frobenius(&["evaluate", "--preset", "anharmonic:c=0", "--x", "1", "--precision", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = frobenius(&["evaluate", "--preset", "anharmonic:c=0", "--x", "1", "--precision", "90", "--digits", "100"]);
    let w: serde_json::Value = serde_json::from_str(&stdout(&r)).unwrap();
    let (a, b): (f64, f64) = (v["value"].as_str().unwrap().parse().unwrap(), w["value"].as_str().unwrap().parse().unwrap());
    assert!(((a - b) / b).abs() < 1e-10);
    assert!(v["terms_used"].as_u64().unwrap() > 0 && v["peak_log10"].is_number());
}

#[test]
fn estimate_csv_matches_leading_forms() {
    let o = frobenius(&["estimate", "--preset", "anharmonic_y:c=0", "--u-min", "0.5", "--u-max", "3", "--samples", "64", "--no-prefactor", "--no-log-correction"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("u,m_bar,log_abs_a,s_second\n"));
    for r in rows(&o) {
        let (u, m): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        // y-space: m = e^{3u}
        assert!((m / (3.0 * u).exp() - 1.0).abs() < 1e-3);
    }
    let x = frobenius(&["estimate", "--preset", "anharmonic:c=0", "--u-min", "1", "--u-max", "6", "--samples", "64"]);
    assert!(x.status.success());
}

#[test]
fn ode_file_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"nu_plus": "1/2", "nu_minus": 0, "s": 1, "v": [0, 0, "1/4"]}}"#).unwrap();
    let path = f.path().to_str().unwrap();
    let a = frobenius(&["coeffs", "--ode", path, "--m-max", "12"]);
    let b = frobenius(&["coeffs", "--preset", "anharmonic:c=0", "--m-max", "12"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| frobenius(args).status.code().unwrap();
    assert_eq!(code(&["coeffs", "--preset", "nope"]), 2);
    assert_eq!(code(&["coeffs", "--m-max", "3"]), 2);
    assert_eq!(code(&["coeffs", "--preset", "anharmonic:c=0", "--ode", "x.json"]), 2);
    assert_eq!(code(&["compare", "--preset", "doublewell:c=2", "--method", "pred0"]), 2);

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"nu_plus": 1, "nu_minus": 0, "v": [1]}}"#).unwrap();
    assert_eq!(code(&["coeffs", "--ode", f.path().to_str().unwrap()]), 3);

    assert_eq!(code(&["estimate", "--preset", "doublewell:c=2", "--u-min", "-1", "--u-max", "2"]), 4);
    assert_eq!(code(&["evaluate", "--preset", "anharmonic:c=0", "--x", "100", "--precision", "50", "--digits", "60"]), 5);
}

#[test]
fn deterministic_output() {
    let args = ["estimate", "--preset", "doublewell:c=1", "--u-min", "1", "--u-max", "3", "--samples", "20"];
    assert_eq!(stdout(&frobenius(&args)), stdout(&frobenius(&args)));
}
