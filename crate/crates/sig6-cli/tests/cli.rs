//! End-to-end tests of the `sig6` binary: output formats, exit codes, and
//! the documented example invocations.

use sig6::{classical_quarter_periods, quarter_period, Modulus};
use std::process::Command;

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_sig6"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code(),
        String::from_utf8(output.stdout).expect("utf8 stdout"),
        String::from_utf8(output.stderr).expect("utf8 stderr"),
    )
}

fn k6(kappa: f64) -> f64 {
    quarter_period(&Modulus::new(kappa).unwrap())
}

fn fields(line: &str) -> Vec<f64> {
    line.split(',').map(|f| f.parse().unwrap()).collect()
}

#[test]
fn eval_trivial_frame_csv() {
    let (code, stdout, _) = run(&["eval", "--kappa", "0.8", "--u", "0"]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "u,phi,psi,s,c,d,delta,partial,sigma,nabla,S,C,D,tn,T");
    let row = fields(lines[1]);
    assert_eq!(row.len(), 15);
    let (u, phi, s, c, d, delta) = (row[0], row[1], row[3], row[4], row[5], row[6]);
    assert_eq!((u, phi, s, c, d, delta), (0.0, 0.0, 0.0, 1.0, 1.0, 1.0));
}

#[test]
fn eval_json_has_all_keys() {
    let (code, stdout, _) = run(&["eval", "--kappa", "0.8", "--u", "0.5", "--format", "json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let object = v.as_object().unwrap();
    for key in [
        "u", "phi", "psi", "s", "c", "d", "delta", "partial", "sigma", "nabla", "S", "C", "D",
        "tn", "T",
    ] {
        assert!(object.contains_key(key), "missing {key}");
    }
    assert_eq!(object.len(), 15);
    assert!(object["tn"].is_f64());
    // Quadratic relation straight from the output.
    let (s, c) = (object["s"].as_f64().unwrap(), object["c"].as_f64().unwrap());
    assert!((s * s + c * c - 1.0).abs() <= 1e-14);
}

#[test]
fn eval_json_flags_tn_pole_as_null() {
    let u = format!("{}", k6(0.8));
    let (code, stdout, _) = run(&["eval", "--kappa", "0.8", "--u", &u, "--format", "json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["tn"].is_null());
    assert!(v["T"].is_null());
    assert!((v["d"].as_f64().unwrap() - 0.6).abs() <= 1e-12);
}

#[test]
fn eval_rejects_kappa_outside_unit_interval() {
    let (code, _, stderr) = run(&["eval", "--kappa", "1.2", "--u", "0"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("kappa must lie in (0,1)"), "{stderr}");
}

#[test]
fn eval_rejects_non_finite_u() {
    // Equals form: a bare "-inf" token is not number-like to the arg parser.
    for u in ["--u=nan", "--u=inf", "--u=-inf"] {
        let (code, _, stderr) = run(&["eval", "--kappa", "0.8", u]);
        assert_eq!(code, Some(2), "{u}: {stderr}");
        assert!(stderr.contains("finite"), "{u}: {stderr}");
    }
}

#[test]
fn table_two_rows_inclusive() {
    let u_max = format!("{}", k6(0.8));
    let (code, stdout, _) = run(&[
        "table", "--kappa", "0.8", "--u-min", "0", "--u-max", &u_max, "--steps", "2",
    ]);
    assert_eq!(code, Some(0));
    assert!(!stdout.contains('\r'), "LF endings only");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "u,phi,psi,s,c,d,delta,partial,sigma,nabla");
    let first = fields(lines[1]);
    assert_eq!(&first[..4], &[0.0, 0.0, 0.0, 0.0]);
    let last = fields(lines[2]);
    assert!((last[5] - 0.6).abs() <= 1e-12, "d(K6) = lambda");
}

#[test]
fn table_d_column_is_even_and_periodic() {
    let bound = 2.0 * k6(0.8);
    let (code, stdout, _) = run(&[
        "table",
        "--kappa",
        "0.8",
        "--u-min",
        &format!("{}", -bound),
        "--u-max",
        &format!("{bound}"),
        "--steps",
        "33",
    ]);
    assert_eq!(code, Some(0));
    let rows: Vec<Vec<f64>> = stdout.lines().skip(1).map(fields).collect();
    assert_eq!(rows.len(), 33);
    let d: Vec<f64> = rows.iter().map(|r| r[5]).collect();
    for i in 0..33 {
        assert!((d[i] - d[32 - i]).abs() <= 1e-10, "even in u at {i}");
    }
    for i in 0..17 {
        assert!((d[i] - d[i + 16]).abs() <= 1e-10, "2K6-periodic at {i}");
    }
}

#[test]
fn table_writes_file() {
    let path = std::env::temp_dir().join(format!("sig6-table-{}.csv", std::process::id()));
    let (code, stdout, _) = run(&[
        "table", "--kappa", "0.5", "--u-min", "0", "--u-max", "1", "--steps", "3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("u,phi,psi,"));
    assert_eq!(content.lines().count(), 4);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn table_reports_write_failure() {
    let (code, _, stderr) = run(&[
        "table", "--kappa", "0.5", "--u-min", "0", "--u-max", "1", "--steps", "2", "--out",
        "/nonexistent-dir-sig6/table.csv",
    ]);
    assert_eq!(code, Some(3));
    assert!(stderr.contains("cannot write"), "{stderr}");
}

#[test]
fn verify_passes_at_default_tolerance() {
    let (code, stdout, _) = run(&["verify", "--kappa-list", "0.5", "--u-count", "9"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("kappa = 0.5: PASS"), "{stdout}");
    assert!(stdout.contains("R04_d_sextic_ode"));
}

#[test]
fn verify_fails_below_rounding_floor() {
    let (code, stdout, stderr) = run(&[
        "verify",
        "--kappa-list",
        "0.5",
        "--u-count",
        "9",
        "--tol",
        "1e-18",
    ]);
    assert_eq!(code, Some(1));
    assert!(stdout.contains("FAIL"), "{stdout}");
    assert!(stderr.contains("exceeded tol"), "{stderr}");
}

#[test]
fn verify_rejects_empty_kappa_list() {
    let (code, _, stderr) = run(&["verify", "--kappa-list", ""]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("kappa-list"), "{stderr}");
}

#[test]
fn periods_match_oracles() {
    let (code, stdout, _) = run(&["periods", "--kappa", "0.8"]);
    assert_eq!(code, Some(0));
    let value = |label: &str| -> f64 {
        stdout
            .lines()
            .find(|line| line.starts_with(label))
            .unwrap_or_else(|| panic!("no line for {label}"))
            .split('=')
            .nth(1)
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    // 50-digit offline oracles: quadrature and AGM routes.
    assert!((value("K6(kappa)") - 1.800_800_819_431_929_2).abs() <= 1e-13);
    assert!((value("K(kappa)") - 1.995_302_777_664_729_4).abs() <= 1e-13);
    assert!((value("K'(kappa)") - 1.750_753_802_915_752_5).abs() <= 1e-13);
}

#[test]
fn periods_symmetric_at_the_self_complementary_modulus() {
    let (code, stdout, _) = run(&["periods", "--kappa", "0.7071067811865476"]);
    assert_eq!(code, Some(0));
    let values: Vec<f64> = stdout
        .lines()
        .map(|line| line.split('=').nth(1).unwrap().trim().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 4);
    assert!((values[0] - values[1]).abs() <= 1e-12, "K6 pair");
    assert!((values[2] - values[3]).abs() <= 1e-12, "classical pair");
}

#[test]
fn continue_classical_rectangle_returns() {
    let (k, k_prime) = classical_quarter_periods(0.8).unwrap();
    let path = format!(
        "0.3,{r},{r}+{t}i,0.3+{t}i,0.3",
        r = 0.3 + 4.0 * k,
        t = 4.0 * k_prime
    );
    let (code, stdout, _) = run(&[
        "continue",
        "--kappa",
        "0.8",
        "--system",
        "classical",
        "--path",
        &path,
    ]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["system"], "classical");
    assert!(v["return_residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["invariant_drift"].as_f64().unwrap() <= 1e-9);
    assert!(v["min_abs_p"].is_null());
    assert!(v["delta_return"].is_null());
    assert!(v["law_half_periods"].is_null(), "not a straight segment");
    assert_eq!(v["waypoints"].as_array().unwrap().len(), 5);
}

#[test]
fn continue_sig6_real_translation_law() {
    let step = 2.0 * k6(0.8);
    let (code, stdout, _) = run(&[
        "continue",
        "--kappa",
        "0.8",
        "--path",
        &format!("0,{step}"),
    ]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["system"], "sig6");
    assert_eq!(v["law_half_periods"], 1);
    assert!(v["law_residual"].as_f64().unwrap() <= 1e-9);
    assert!(v["delta_return"].as_f64().unwrap() <= 1e-9);
    assert!(v["invariant_drift"].as_f64().unwrap() <= 1e-9);
    assert!(v["min_abs_p"].as_f64().unwrap() > 1e-8);
    // s, c, sigma negate while d, partial return, so the raw residual is
    // far from zero even though the law holds.
    assert!(v["return_residual"].as_f64().unwrap() > 1.0);
}

#[test]
fn continue_exits_on_blowup() {
    let (code, _, stderr) = run(&["continue", "--kappa", "0.8", "--path", "0,4i"]);
    assert_eq!(code, Some(4));
    assert!(
        stderr.contains("underflow") || stderr.contains("singularity"),
        "{stderr}"
    );
}

#[test]
fn continue_rejects_malformed_waypoints() {
    let (code, _, stderr) = run(&["continue", "--kappa", "0.8", "--path", "0,1+2j"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("invalid waypoint"), "{stderr}");
    let (code, _, _) = run(&["continue", "--kappa", "0.8", "--path", "0.5"]);
    assert_eq!(code, Some(2), "single waypoint");
    let (code, _, stderr) = run(&["continue", "--kappa", "0.8", "--path", "0,nan"]);
    assert_eq!(code, Some(2), "non-finite waypoint: {stderr}");
    assert!(stderr.contains("invalid waypoint"), "{stderr}");
}
