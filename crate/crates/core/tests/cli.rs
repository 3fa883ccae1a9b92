use std::path::Path;
use std::process::{Command, Output};

use coulomb_gauge::fieldcore::io::write_vector_field;
use coulomb_gauge::fieldcore::Grid3;
use coulomb_gauge::presets::GradientBump;
use serde_json::Value;

fn bin(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulomb-gauge")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn helmholtz_writes_both_parts_and_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["helmholtz"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["longitudinal.field", "transverse.field", "helmholtz.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let j = json(&dir.path().join("helmholtz.json"));
    assert_eq!(j["checked_part"], "transverse");
    assert_eq!(j["passed"], true);
    assert_eq!(j["grid"]["dims"][0], 24);
}

#[test]
fn helmholtz_tolerance_flag_can_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["helmholtz", "--grid", "12", "--tolerance", "0"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("one or more checks failed"));
    assert_eq!(json(&dir.path().join("helmholtz.json"))["passed"], false);
}

#[test]
fn potentials_presets_write_their_fields() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["potentials", "--preset", "flux-tube"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("a.field").exists());
    let j = json(&dir.path().join("potentials.json"));
    assert_eq!(j["source"], "flux-tube");
    assert!(j["metrics"].as_array().unwrap().iter().any(|m| m[0] == "curl_relative"));

    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["potentials", "--grid", "12", "--preset", "dipole-radiation"], dir.path());
    assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("a.field").exists() && dir.path().join("phi.field").exists());

    let o = bin(&["potentials", "--grid", "12", "--preset", "nonsense"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn coarse_grid_reports_failure_honestly() {
    // At 12³ the flux-tube curl residual exceeds the 5% default; the run still writes its output.
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["potentials", "--grid", "12"], dir.path());
    assert_eq!(code(&o), 1);
    let j = json(&dir.path().join("potentials.json"));
    assert_eq!(j["passed"], false);
    assert!(dir.path().join("a.field").exists());
}

#[test]
fn potentials_accepts_a_field_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid3::cube(12, 1.0).unwrap();
    let input = dir.path().join("b.field");
    write_vector_field(&input, &GradientBump::for_grid(&grid).sample(&grid).unwrap()).unwrap();
    let out = dir.path().join("run");
    let o = bin(&["potentials", "--input", input.to_str().unwrap()], &out);
    assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("a.field").exists());
    assert_eq!(json(&out.join("potentials.json"))["grid"]["dims"][2], 12);
}

#[test]
fn solenoid_profile_csv_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["solenoid-profile", "--rho-min", "0.5", "--rho-max", "2", "--n-rho", "4", "--R", "5"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("solenoid_profile.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "rho,z,R,Phi,a_exact,a_series,a_stokes,a_full_theta");
    assert_eq!(lines.len(), 5);
    let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(first[0], 0.5);
    assert_eq!(first[2], 5.0);
    assert!((first[4] / first[6] - (1.0 + 0.01f64).powf(-0.5)).abs() < 1e-14);
}

#[test]
fn solenoid_profile_on_the_axis_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["solenoid-profile", "--rho-min", "0"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("solenoid_profile.csv").exists());
}

#[test]
fn ab_fringes_period_follows_the_charge() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["ab-fringes"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = json(&dir.path().join("period.json"));
    assert!((j["period_estimate"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-6 * std::f64::consts::TAU);
    assert!(dir.path().join("fringes.csv").exists());

    let o = bin(&["ab-fringes", "--q", "2"], dir.path());
    assert_eq!(code(&o), 0);
    let j = json(&dir.path().join("period.json"));
    assert!((j["period_estimate"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-6 * std::f64::consts::PI);
    assert_eq!(j["expected"].as_f64().unwrap(), std::f64::consts::PI);
}

#[test]
fn ab_fringes_under_resolved_scan_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["ab-fringes", "--flux-max", "9.0", "--n-flux", "12"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn radiation_scan_reports_the_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["radiation-scan"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("radiation_scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(dir.path().join("radiation.json").exists());
    assert!(String::from_utf8_lossy(&o.stdout).contains("fitted exponent -2.0000"));

    let o = bin(&["radiation-scan", "--radii", "10,20,40"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_strict_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["verify", "--grid", "12", "--tolerance", "0"], dir.path());
    assert_eq!(code(&o), 1);
    let j = json(&dir.path().join("verify.json"));
    assert_eq!(j["passed"], false);
    let checks = j["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    let b_radial = checks.iter().find(|c| c["name"] == "b_radial_zero").unwrap();
    assert_eq!(b_radial["status"], "pass");
}

#[test]
fn verify_flags_a_non_solenoidal_field_as_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid3::cube(12, 1.0).unwrap();
    let input = dir.path().join("grad.field");
    write_vector_field(&input, &GradientBump::for_grid(&grid).sample(&grid).unwrap()).unwrap();
    let out = dir.path().join("run");
    let o = bin(&["verify", "--grid", "12", "--b-input", input.to_str().unwrap()], &out);
    assert_eq!(code(&o), 1);
    let j = json(&out.join("verify.json"));
    let balance = j["checks"].as_array().unwrap().iter().find(|c| c["name"] == "a_squared_balance").unwrap().clone();
    assert_eq!(balance["status"], "inconclusive");
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, r#"{"solenoid": {"rho_min": 1.0, "rho_max": 3.0, "n_rho": 3, "half_side": 7.0}}"#).unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let o = bin(&["--config", cfg_s, "solenoid-profile"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("solenoid_profile.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,0,7,"));

    let o = bin(&["--config", cfg_s, "solenoid-profile", "--n-rho", "5", "--half-side", "9"], dir.path());
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("solenoid_profile.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,0,9,"));
}

#[test]
fn bad_config_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    let o = bin(&["--config", cfg.to_str().unwrap(), "radiation-scan"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));

    let missing = dir.path().join("absent.json");
    assert_eq!(code(&bin(&["--config", missing.to_str().unwrap(), "radiation-scan"], dir.path())), 2);
    assert_eq!(code(&bin(&["no-such-command"], dir.path())), 2);
    assert_eq!(code(&bin(&["ab-fringes", "--q", "abc"], dir.path())), 2);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(code(&bin(&["--seed", "7", "ab-fringes", "--noise", "0.01"], d.path())), 0);
        assert_eq!(code(&bin(&["--seed", "4", "helmholtz", "--preset", "random"], d.path())), 0);
    }
    for f in ["fringes.csv", "period.json", "transverse.field", "helmholtz.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let c = tempfile::tempdir().unwrap();
    assert_eq!(code(&bin(&["--seed", "8", "ab-fringes", "--noise", "0.01"], c.path())), 0);
    assert_ne!(
        std::fs::read(a.path().join("fringes.csv")).unwrap(),
        std::fs::read(c.path().join("fringes.csv")).unwrap()
    );
}
