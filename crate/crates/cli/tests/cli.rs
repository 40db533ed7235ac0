use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nlmkdv::fixtures;
use nlmkdv::scattering::InitialDatum;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn nlmkdv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlmkdv"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .unwrap()
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn phase_reports_first_saddle() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(dir.path(), &["phase", "--xi", "-3", "--grid", "-2:2:11", "--circle", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(dir.path(), "saddles.json");
    let (re, im) = pair(&s["zeta"][0]);
    assert!((re - 0.86603).abs() < 1e-5 && (im - 0.5).abs() < 1e-12);
    assert_eq!(s["command"], "phase");
    let csv = std::fs::read_to_string(dir.path().join("signature.csv")).unwrap();
    assert!(csv.starts_with("# config: "));
    assert_eq!(csv.lines().nth(1).unwrap(), "re,im,kind,signature,re_2itheta");
}

#[test]
fn phase_outside_region_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(dir.path(), &["phase", "--xi", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scatter_background_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(
        dir.path(),
        &[
            "scatter",
            "--datum",
            &fixture("background_datum.json"),
            "--n-contour",
            "16",
            "--mesh",
            "4",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(dir.path(), "scattering.json");
    assert_eq!(s["poles"].as_array().unwrap().len(), 0);
    for r in s["sigma_contour_samples"].as_array().unwrap() {
        let (a, b) = pair(&r["rho"]);
        let (c, d) = pair(&r["rho_tilde"]);
        assert!(a.hypot(b) < 1e-12 && c.hypot(d) < 1e-12);
    }
    assert_eq!(s["diagnostics"]["winding_count"], 0);
}

#[test]
fn truncated_datum_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let d = InitialDatum::from_fn(fixtures::perturbed_profile, 1.0, 101, fixtures::pt_boundary()).unwrap();
    let p = dir.path().join("short.json");
    std::fs::write(&p, d.to_json().unwrap()).unwrap();
    let o = nlmkdv(dir.path(), &["scatter", "--datum", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn asym_below_t_min_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(
        dir.path(),
        &["asym", "--data", &fixture("radiation.json"), "--xi", "1", "--t", "9.5"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["asym", "--data", &fixture("radiation.json"), "--xi", "-2,1", "--t", "20,200,2000"];
    for d in [&a, &b] {
        assert!(nlmkdv(d.path(), &args).status.success());
    }
    for name in ["asym.csv", "asym.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn asym_dump_has_intermediates() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(dir.path(), &["--dump-intermediates", "asym", "--xi", "0.5", "--t", "50"]);
    assert!(o.status.success());
    let v = json(dir.path(), "asym_intermediates.json");
    let p = &v["points"][0];
    assert_eq!(p["pc"]["saddles"].as_array().unwrap().len(), 4);
    assert!(p["e1"].is_array() || p["e1"].is_object());
    assert_eq!(v["error_order"], "O(t^-1)");
}

#[test]
fn residual_from_poles_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(
        dir.path(),
        &[
            "verify",
            "residual",
            "--poles",
            &fixture("one_pole.json"),
            "--x",
            "-4:4:6",
            "--t",
            "-0.5:0.5:4",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(dir.path(), "residual.json");
    assert!(v["max_residual"].as_f64().unwrap() < 1e-4);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((ratio - 4.0).abs() < 0.8);
}

#[test]
fn decay_from_samples() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let rows: String = [10.0f64, 100.0, 1000.0]
        .iter()
        .map(|t| format!("{t},{}\n", 3.0 * t.powf(-1.5)))
        .collect();
    std::fs::write(&p, format!("t,v\n{rows}")).unwrap();
    let o = nlmkdv(dir.path(), &["verify", "decay", "--samples", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let slope = json(dir.path(), "decay.json")["fit"]["slope"].as_f64().unwrap();
    assert!((slope + 1.5).abs() < 1e-12);
}

#[test]
fn soliton_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(
        dir.path(),
        &[
            "soliton",
            "--poles",
            &fixture("evolution_poles.json"),
            "--x",
            "-5:5:11",
            "--t",
            "0:0:1",
        ],
    );
    assert!(o.status.success());
    let v = json(dir.path(), "soliton.json");
    assert_eq!(v["points"], 11);
    assert!(v["reduction_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(dir.path(), &["verify", "suite", "--samples", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(dir.path(), "suite.json")["all_passed"], true);
    let o = nlmkdv(dir.path(), &["verify", "suite", "--samples", "20", "--reading", "literal"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn phase_grid_is_real_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlmkdv(dir.path(), &["--threads", "2", "phase", "--xi", "0", "--grid", "-3:3:400"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("signature.csv")).unwrap();
    let mut circle = 0;
    for line in csv.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        if f[2] == "circle" {
            circle += 1;
            assert_eq!(f[3], "0");
            assert!(f[4].parse::<f64>().unwrap().abs() < 1e-12);
        }
    }
    assert!(circle > 0);
    assert_eq!(csv.lines().count() - 2, 400 * 400 + circle);
}
