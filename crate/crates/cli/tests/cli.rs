use std::process::{Command, Output};

use serde_json::Value;

fn screwcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screwcal"))
        .args(args)
        .env_remove("SCREWCAL_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn bi_invariance_report_has_the_documented_schema() {
    let out = screwcal(&[
        "verify",
        "bi-invariance",
        "--kappa",
        "1",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["suite"], "bi-invariance");
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["config"]["kappa"], 1);
    assert_eq!(r["pass"], true);
    for c in r["checks"].as_array().unwrap() {
        for key in ["name", "paper_ref", "measured", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert!(!c["paper_ref"].as_str().unwrap().is_empty());
    }
    assert!(
        check(&r, "ad_skewness[kappa=1]")["measured"]
            .as_f64()
            .unwrap()
            < 1e-11
    );
}

#[test]
fn optimal_s3_passes() {
    let out = screwcal(&["verify", "optimal-s3", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        check(&json(&out), "optimality_residual")["measured"]
            .as_f64()
            .unwrap()
            < 1e-6
    );
}

#[test]
fn involutivity_reports_a_positive_defect_in_flat_space() {
    let out = screwcal(&["verify", "involutivity", "--kappa", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let d = check(&json(&out), "min_defect[kappa=0]")["measured"]
        .as_f64()
        .unwrap();
    assert!((d - 1.0).abs() < 1e-9);
}

#[test]
fn negative_kappa_is_accepted() {
    let out = screwcal(&["verify", "involutivity", "--kappa", "-1", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        check(&json(&out), "min_defect[kappa=-1]")["measured"]
            .as_f64()
            .unwrap()
            > 1.9
    );
}

#[test]
fn warren_suite_reports_the_non_calibrated_blades() {
    let out = screwcal(&["verify", "warren", "--c", "1", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(check(&r, "warren_residual[c=1]")["pass"], true);
    assert_eq!(check(&r, "omega_minus_volume[c=1]")["pass"], false);
    assert_eq!(r["pass"], false);
}

#[test]
fn every_suite_runs_and_reports() {
    for suite in [
        "algebra",
        "local-isometry",
        "spacelike-lemma",
        "calibration",
        "vorticity",
        "intrinsic",
    ] {
        let out = screwcal(&["verify", suite, "--samples", "40", "--seed", "3"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(json(&out)["suite"], suite);
    }
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let args = [
        "verify",
        "calibration",
        "--samples",
        "300",
        "--seed",
        "11",
        "--threads",
        "2",
    ];
    let (a, b) = (screwcal(&args), screwcal(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = screwcal(&[
        "verify",
        "calibration",
        "--samples",
        "300",
        "--seed",
        "11",
        "--threads",
        "3",
    ]);
    let strip = |o: &Output| {
        let mut v = json(o);
        v["config"]["threads"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&other));
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("screwcal-out-{}.json", std::process::id()));
    let out = screwcal(&[
        "verify",
        "algebra",
        "--samples",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(
        serde_json::from_str::<Value>(&text).unwrap()["suite"],
        "algebra"
    );
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["verify", "no-such-suite"],
        vec!["verify", "algebra", "--samples", "0"],
        vec!["verify", "algebra", "--tol", "algebra=-1"],
        vec!["verify", "algebra", "--tol", "algebra"],
        vec!["verify", "bi-invariance", "--kappa", "2"],
        vec!["verify", "algebra", "--threads", "0"],
        vec!["volume"],
        vec!["volume", "--domain", "cube:1"],
        vec!["volume", "--domain", "ball:1", "--amplitudes", "0.1,0.2"],
        vec!["grid", "ell", "--r", "0:1:0"],
        vec!["grid", "ell", "--r", "1:0:5"],
        vec!["grid", "sigma", "--r", "0:4:5"],
        vec!["grid", "torsion", "--r", "0:1:5"],
    ] {
        let out = screwcal(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn threads_fall_back_to_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_screwcal"))
        .args(["verify", "algebra", "--samples", "10"])
        .env("SCREWCAL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["threads"], 2);
}

#[test]
fn volume_on_the_ball() {
    let out = screwcal(&[
        "volume",
        "--domain",
        "ball:1.5708",
        "--c",
        "1",
        "--amplitudes",
        "0,0.01,0.05",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["violations"], 0);
    assert_eq!(r["competitors"].as_array().unwrap().len(), 18);
    assert!(r["omega_spread"].as_f64().unwrap() < 1e-6);
    assert!((r["base_volume"].as_f64().unwrap() - 1.7100758623616332).abs() < 1e-9);
}

#[test]
fn volume_on_the_first_shell() {
    let out = screwcal(&[
        "volume",
        "--domain",
        "shell:1",
        "--delta",
        "0.2",
        "--resolution",
        "24,12,16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["violations"], 0);
    assert_eq!(r["pass"], true);
    assert!(
        (r["domain"]["r_lo"].as_f64().unwrap() - (2.0 * std::f64::consts::PI + 0.2)).abs() < 1e-12
    );
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
#[allow(clippy::approx_constant)]
fn sphere_area_grid() {
    let out = screwcal(&["grid", "sphere-area", "--r", "0:3.14159:200", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["r", "sphere_area"]);
    assert_eq!(rows.len(), 201);
    let last: f64 = rows[200][0].parse().unwrap();
    assert_eq!(last, 3.14159);
    // 17 significant digits
    let mantissa = rows[100][1].split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
    let r: f64 = rows[100][0].parse().unwrap();
    let v: f64 = rows[100][1].parse().unwrap();
    let ell = (r - r.sin()).cbrt();
    assert!((v - 2.0 * std::f64::consts::PI * ell * r.sin()).abs() < 1e-14);
}

#[test]
fn vorticity_grid_keeps_its_sign_inside_the_shell() {
    let out = screwcal(&[
        "grid",
        "vorticity-h",
        "--section",
        "screw:c=1",
        "--r",
        "3.4:6.2:100",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let h: Vec<f64> = csv_rows(&out)[1..]
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert_eq!(h.len(), 100);
    assert!(h.iter().all(|v| *v > 0.0));
}

#[test]
fn other_grids() {
    for (q, range, cols) in [
        ("ell", "0:9:10", 2),
        ("ell-prime", "0:9:10", 2),
        ("sigma", "0:3.141592653589793:10", 2),
        ("circle-length", "0:3:10", 2),
        ("area-ratio", "0.1:3.14:10", 2),
        ("pullback-eigs", "0:9:10", 4),
    ] {
        let out = screwcal(&["grid", q, "--r", range]);
        assert_eq!(out.status.code(), Some(0), "{q}");
        let rows = csv_rows(&out);
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.len() == cols));
    }
}
