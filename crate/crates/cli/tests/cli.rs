use std::path::Path;
use std::process::{Command, Output};

use henon_core::{Dynamics, HenonMap, Point, Polynomial};
use serde_json::Value;

fn henon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_henon")).args(args).env_remove("HENON_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// Real roots of the tangency value on the vertical line over `x`, by sign
/// changes of the real part on a uniform grid refined by bisection.
fn scan_roots(dy: &Dynamics, x: f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let f = |y: f64| dy.tangency_value(Point::real(x, y)).ok().map(|t| t.value);
    let n = ((hi - lo) / step).round() as usize;
    let mut roots = Vec::new();
    for k in 0..n {
        let (a0, b0) = (lo + k as f64 * step, lo + (k + 1) as f64 * step);
        let (Some(fa), Some(fb)) = (f(a0), f(b0)) else { continue };
        if fa.re.signum() == fb.re.signum() {
            continue;
        }
        let (mut a, mut b, mut sa) = (a0, b0, fa.re.signum());
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let Some(fm) = f(m) else { break };
            if fm.re.signum() == sa {
                a = m;
                sa = fm.re.signum();
            } else {
                b = m;
            }
        }
        let m = 0.5 * (a + b);
        if f(m).is_some_and(|v| v.norm() < 1e-8) {
            roots.push(m);
        }
    }
    roots
}

#[test]
fn verify_core_on_the_square_map() {
    let out = henon(&["verify", "--suite", "core"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["polynomial"], "x2");
    let core = &r["data"]["core"];
    assert!(core["phi_plus_recursion"]["max_residual"].as_f64().unwrap() < 1e-9);
    assert!(core["green_plus_recursion"]["samples"].as_u64().unwrap() > 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_core_with_both_sides() {
    let out = henon(&["verify", "--suite", "core", "--p", "x2-1", "--a", "0.05", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["data"]["core"]["green_minus_recursion"]["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(r["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn critlocus_trace_agrees_with_scan() {
    let out = henon(&["critlocus", "--p", "x2-1", "--a", "0.01"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    let samples = r["data"]["components"][0]["trace"]["samples"].as_array().unwrap().clone();
    assert!(samples.len() > 20);
    let dy = Dynamics::new(HenonMap::real(Polynomial::quadratic(-1.0), 0.01)).unwrap();
    for s in samples.iter().step_by(samples.len() / 5) {
        let x = s["point"]["x"][0].as_f64().unwrap();
        let y = s["point"]["y"][0].as_f64().unwrap();
        assert!(y.abs() <= 0.05);
        let nearest = scan_roots(&dy, x, -0.5, 0.5, 1e-3).iter().map(|r| (r - y).abs()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6, "x = {x}: {nearest:e}");
    }
}

#[test]
fn rigidity_case_matches_golden() {
    let out = henon(&["rigidity", "--case", "c1_zero"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let golden = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "defect series matches the golden file").unwrap();
    assert_eq!(golden["pass"], true);
    assert_eq!(r["data"]["cases"][0]["violations_detected"], 25);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "seed = 4\nspeed = 9\n");
    let out = henon(&["--config", &bad, "verify"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["kind"], "config");
    assert_eq!(henon(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(henon(&["holonomy"]).status.code(), Some(2));
    assert_eq!(henon(&["verify", "--p", "x2+"]).status.code(), Some(2));
    assert_eq!(henon(&["verify", "--a", "5"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_henon")).args(["verify"]).env("HENON_THREADS", "many").output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn failed_assertion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let strict = write(dir.path(), "strict.toml", "[tolerances]\ninvariance = 0.0\n");
    let out = henon(&["--config", &strict, "manifold", "--p", "x2-1", "--a", "0.01", "--no-index"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["status"], "fail");
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}

#[test]
fn flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", "seed = 9\n[map]\np = \"x2-1\"\na = [0.05, 0.0]\n");
    let r = json(&henon(&["--config", &cfg, "--a", "0.01", "verify"]));
    assert_eq!(r["a"][0], 0.01);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["polynomial"], "x2-1");
}

#[test]
fn printed_config_round_trips() {
    let first = henon(&["--p", "x3-3x", "--a", "0.01,-0.002", "--seed", "5", "--print-config", "critlocus", "--circles", "2,8"]);
    assert_eq!(first.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "printed.toml", &String::from_utf8(first.stdout.clone()).unwrap());
    let second = henon(&["--config", &path, "--print-config", "critlocus"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn outputs_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let run = |dir: &Path, threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_henon"));
        cmd.args(["green-grid", "--p", "x2-1", "--a", "0.05", "--width", "48", "--height", "32", "--out"]).arg(dir);
        match threads {
            Some(t) => cmd.env("HENON_THREADS", t),
            None => cmd.env_remove("HENON_THREADS"),
        };
        cmd.output().unwrap()
    };
    let a = run(d1.path(), None);
    let b = run(d2.path(), Some("1"));
    assert_eq!(a.status.code(), Some(0));
    let strip = |o: &Output, d: &Path| String::from_utf8(o.stdout.clone()).unwrap().replace(&*d.to_string_lossy(), "OUT");
    assert_eq!(strip(&a, d1.path()), strip(&b, d2.path()));
    for f in ["green-plus.pgm", "green-plus.json"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap(), "{f}");
    }
    let h1 = henon(&["holonomy", "--p", "x2-1", "--a", "0.01", "--depth", "2"]);
    let h2 = henon(&["holonomy", "--p", "x2-1", "--a", "0.01", "--depth", "2", "--sequential"]);
    assert_eq!(h1.stdout, h2.stdout);
}

#[test]
fn pgm_layout_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_henon"))
        .args(["green-grid", "--quantity", "green-minus", "--p", "x2", "--a", "0.01", "--width", "20", "--height", "10", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(dir.path().join("green-minus.pgm")).unwrap();
    let header = b"P5\n20 10\n65535\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 2 * 200);
    let side: Value = serde_json::from_slice(&std::fs::read(dir.path().join("green-minus.json")).unwrap()).unwrap();
    assert_eq!(side["width"], 20);
    assert_eq!(side["quantity"], "green-minus");
    assert!(side["min"].as_f64().unwrap() >= 0.01f64.ln() - 1e-12);
}

#[test]
fn holonomy_and_manifold_reports() {
    let r = json(&henon(&["holonomy", "--p", "x2-1", "--a", "0.01"]));
    assert_eq!(r["status"], "pass");
    assert_eq!(r["data"]["points"].as_array().unwrap().len(), 2);
    let w = &r["data"]["witnesses"][1]["witness"];
    assert!((w["omega"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    let m = json(&henon(&["manifold", "--p", "x2-1", "--a", "0.005"]));
    assert_eq!(m["status"], "pass");
    assert_eq!(m["data"]["index"]["outer"], 1);
    assert_eq!(m["data"]["index"]["with_holes"]["region"], -1);
}
