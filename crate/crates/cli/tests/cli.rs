use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipoisson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn describe_semicircle() {
    let v = json(&["describe", "--eta", "0", "--theta", "0", "--t", "1"]);
    assert!(v["atoms"].as_array().unwrap().is_empty());
    assert_eq!(v["density_samples"].as_array().unwrap().len(), 512);
    assert!((num(&v["ac_support"][0]) + 2.0).abs() < 1e-12);
    assert!((num(&v["total_mass"]) - 1.0).abs() < 1e-10);
}

#[test]
fn describe_atom_below_threshold() {
    let v = json(&["describe", "--eta", "1", "--theta", "1", "--t", "0.25"]);
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((num(&atoms[0][0]) + 0.25).abs() < 1e-10);
    assert!((num(&atoms[0][1]) - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn describe_two_point_law() {
    let v = json(&["describe", "--eta", "-1", "--theta", "1", "--t", "2"]);
    assert!(v["ac_support"].is_null());
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 2);
    assert!(
        (num(&atoms[0][0]) + 2.0).abs() < 1e-10 && (num(&atoms[0][1]) - 1.0 / 3.0).abs() < 1e-10
    );
    assert!(
        (num(&atoms[1][0]) - 1.0).abs() < 1e-10 && (num(&atoms[1][1]) - 2.0 / 3.0).abs() < 1e-10
    );
}

#[test]
fn bad_parameters_exit_2() {
    let out = run(&["describe", "--eta", "2", "--theta", "-1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 + eta*theta"));
    assert_eq!(
        run(&["describe", "--eta", "x", "--t", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["sample", "--times", "2,1"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn support_plot_shapes() {
    let v = json(&[
        "support-plot",
        "--eta",
        "0",
        "--theta",
        "0",
        "--t",
        "4",
        "--n",
        "4",
    ]);
    assert!(v["atom_curves"].as_array().unwrap().is_empty());
    assert!(v["support_bands"][0].is_null());
    assert!((num(&v["support_bands"][4][1]) - 4.0).abs() < 1e-10);

    let v = json(&[
        "support-plot",
        "--eta",
        "1",
        "--theta",
        "1",
        "--t",
        "3",
        "--n",
        "30",
    ]);
    assert_eq!(v["atom_curves"].as_array().unwrap().len(), 2);
    // Atom at −t/θ lives below t = 1/2, the one at −1/η above t = 2.
    for p in v["atom_curves"][0]["points"].as_array().unwrap() {
        assert!(num(&p[0]) < 0.5);
    }
    for p in v["atom_curves"][1]["points"].as_array().unwrap() {
        assert!(num(&p[0]) > 2.0);
    }

    let v = json(&[
        "support-plot",
        "--eta",
        "-1",
        "--theta",
        "1",
        "--t",
        "2",
        "--n",
        "4",
    ]);
    assert_eq!(v["degenerate"], Value::Bool(true));
    assert!(v["support_bands"]
        .as_array()
        .unwrap()
        .iter()
        .all(Value::is_null));
    assert_eq!(v["atom_curves"][1]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_identities_exact() {
    let v = json(&["verify", "--suite", "identities", "--mode", "exact"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(num(&v["max_residual"]), 0.0);
    assert!(v["checks"].as_array().unwrap().len() >= 20);
}

#[test]
fn verify_harness_point() {
    let v = json(&[
        "verify", "--suite", "harness", "--eta", "0.5", "--theta", "1",
    ]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(num(&v["max_residual"]) < 1e-8);
}

#[test]
fn verify_preconditions_exit_2() {
    let out = run(&[
        "verify", "--suite", "reversal", "--eta", "0.5", "--theta", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta = theta"));
    let out = run(&[
        "verify",
        "--suite",
        "semigroup",
        "--eta",
        "0.5",
        "--theta",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_parallel_matches_serial() {
    let serial = run(&["verify", "--suite", "chapman", "--mode", "float"]);
    let parallel = run(&[
        "verify",
        "--suite",
        "chapman",
        "--mode",
        "float",
        "--parallel",
        "4",
    ]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--times", "1,2,3", "--n", "1000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# seed=7"));
    assert_eq!(lines.next(), Some("time,value"));
    assert_eq!(lines.count(), 3000);
    let other = run(&["sample", "--times", "1,2,3", "--n", "1000", "--seed", "8"]);
    assert_ne!(text.as_bytes(), other.stdout.as_slice());
}

#[test]
fn degenerate_paths_stay_on_atoms() {
    let out = run(&[
        "sample", "--eta", "-1", "--theta", "1", "--times", "1,2,3", "--n", "200", "--seed", "3",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        let (t, x) = line.split_once(',').unwrap();
        let (t, x): (f64, f64) = (t.parse().unwrap(), x.parse().unwrap());
        assert!((x + t).abs() < 1e-9 || (x - 1.0).abs() < 1e-9, "{t},{x}");
    }
}

#[test]
fn convolve_semigroup() {
    let v = json(&[
        "convolve", "--theta", "1", "--eta", "0.5", "--s", "1", "--t", "2", "--order", "10",
    ]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["convolution"], v["pair_s_plus_t"]);
    assert_eq!(v["convolution"]["second"].as_array().unwrap().len(), 11);
    assert!(v["r"].as_array().unwrap().iter().all(|c| c == "9/2"));
    assert!(v["R"].as_array().unwrap().iter().all(|c| c == "3"));
    let out = run(&["convolve", "--theta", "1/2", "--s", "1", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("bipoisson-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let out = run(&["describe", "--t", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["t"], Value::from(1.0));
    std::fs::remove_dir_all(dir).unwrap();
}
