use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn iso(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_iso-compare"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("ISO_COMPARE_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn bishop_bound_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", "command = bishop-bound\nn = 3\nric0 = 2\n");
    let out = dir.path().join("b.json");
    let o = iso(&["bishop-bound", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["bound"].as_f64().unwrap() - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
    assert!((v["x0"].as_f64().unwrap() - 44.546624).abs() < 1e-6);
    assert_eq!(v["meta"]["tool"], "iso-compare");
    assert_eq!(v["meta"]["params"]["ric0"], "2");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.cfg", "eps_grid = 0.05:0.5:6\n");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, Some("1")), (&b, Some("4"))] {
        let o = iso(&["football-alpha", "--config", &cfg, "--out", path.to_str().unwrap()], threads);
        assert!(o.status.success());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# iso-compare "));
    assert!(text.contains("# command: football-alpha\n"));
    assert!(text.contains("# params: eps_grid=0.05:0.5:6\n"));
}

#[test]
fn validation_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "# bishop\nn = 3\nric0 = two\n");
    let o = iso(&["bishop-bound", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");

    let o = iso(&["bishop-bound", "--set", "n=2"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("below minimum 3"));

    let o = iso(&["flya"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cylinder-growth"));

    let cfg = write(dir.path(), "typo.cfg", "n = 3\nricO = 2\n");
    let o = iso(&["bishop-bound", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ricO"));
}

#[test]
fn numerical_failure_exits_three() {
    // 16 samples cannot resolve the anchor of the mass function
    let o = iso(&["mass", "--set", "grid=16"], None);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ricci_mass"));
}

#[test]
fn monotonicity_sphere_profile_is_nondecreasing() {
    let o = iso(&["monotonicity", "--case", "sphere", "--lambda", "1", "--set", "sphere_dim=1"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "profile").unwrap();
    let profile: Vec<f64> = lines.map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect();
    assert!(profile.len() >= 16);
    assert!(profile.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn negative_lambda_is_accepted_and_flagged() {
    let o = iso(&["monotonicity", "--case", "circle", "--lambda", "-10"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let v: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("# violations: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(v > 0);
}

#[test]
fn epsilon0_json_shapes() {
    let o = iso(&["epsilon0", "--method", "oracle"], None);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(lo < 0.135 && hi > 0.134 && hi - lo <= 5e-4);

    let o = iso(&["epsilon0", "--method", "as-written", "--format", "csv"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("no_root"), "{text}");
}

#[test]
fn every_command_runs_with_defaults() {
    for cmd in [
        "profile",
        "variation-check",
        "mass",
        "bishop-bound",
        "football-alpha",
        "epsilon0",
        "monotonicity",
        "cutoff-budget",
        "cylinder-growth",
    ] {
        for format in ["csv", "json"] {
            let o = iso(&[cmd, "--format", format], None);
            assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
            let text = String::from_utf8(o.stdout).unwrap();
            if format == "json" {
                let v: Value = serde_json::from_str(&text).unwrap();
                assert_eq!(v["meta"]["command"], cmd);
            } else {
                assert!(text.lines().any(|l| !l.starts_with('#') && l.contains(',')), "{cmd}");
            }
        }
    }
}
