use std::process::{Command, Output};

use clonelab::qkd::{disturbance_di, standard_disturbance_di};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonelab")).args(args).output().expect("binary runs")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn uqcm_table_matches_closed_form() {
    let (header, rows) = csv_rows(&run(&["table", "uqcm", "--d", "2,3", "--N", "1,2", "--M", "2..5"]));
    assert_eq!(header, ["d", "N", "M", "F", "F_global"]);
    assert_eq!(rows.len(), 2 * (4 + 4));
    for r in rows {
        let (d, n, m) = (r[0], r[1], r[2]);
        let f = (n * (m + d) + m - n) / (m * (n + d));
        assert!((r[3] - f).abs() < 1e-11, "{r:?}");
    }
}

#[test]
fn cv_table_one_to_two() {
    let (_, rows) = csv_rows(&run(&["table", "cv", "--N", "1", "--M", "2"]));
    assert!((rows[0][2] - 0.5).abs() < 1e-11);
    assert!((rows[0][3] - 2.0 / 3.0).abs() < 1e-11);
}

#[test]
fn phase_table_qubit_and_qutrit() {
    let (_, rows) = csv_rows(&run(&["table", "phase", "--d", "2,3"]));
    assert!((rows[0][1] - (0.5 + 8f64.sqrt().recip())).abs() < 1e-11);
    assert!((rows[1][1] - (5.0 + 17f64.sqrt()) / 12.0).abs() < 1e-11);
}

#[test]
fn disturbance_table_for_qubits() {
    let (header, rows) = csv_rows(&run(&["table", "king-di", "--d", "2"]));
    assert_eq!(header, ["d", "g", "D_I", "D_I_standard"]);
    for (r, want_std) in rows.iter().zip([14.64, 15.64]) {
        let g = r[1] as usize;
        assert!((r[2] - disturbance_di(2, g).unwrap()).abs() < 1e-9);
        assert!((r[3] - standard_disturbance_di(2, g).unwrap()).abs() < 1e-9);
        assert!((r[3] - want_std).abs() < 0.1);
        assert!(r[2] > r[3]);
    }
}

#[test]
fn king_sweep_five_curves() {
    let (_, rows) = csv_rows(&run(&["sweep", "king", "--d", "5", "--g", "1..5", "--grid", "0.4:0.95:6"]));
    assert_eq!(rows.len(), 30);
    let curve = |g: f64| rows.iter().filter(|r| r[1] == g).map(|r| r[3]).collect::<Vec<_>>();
    for g in 1..=5 {
        let c = curve(g as f64);
        assert!(c.windows(2).all(|w| w[1] < w[0]), "g={g}: {c:?}");
    }
    for g in 1..5 {
        let (a, b) = (curve(g as f64), curve(g as f64 + 1.0));
        assert!(a.iter().zip(&b).all(|(x, y)| y <= x), "g={g}");
    }
}

#[test]
fn qubit_comparison_sweep() {
    let (header, rows) = csv_rows(&run(&["sweep", "compare", "--grid", "0.55:0.99:12"]));
    assert_eq!(header[0], "F_Bob");
    for r in rows {
        assert!(r[1] <= r[3] + 1e-12 && r[1] <= r[4] + 1e-12, "{r:?}");
        assert!(r[2] <= r[1] + 1e-12);
    }
}

#[test]
fn empty_grid_is_a_usage_error() {
    for grid in ["", "0.5:0.9:0"] {
        let out = run(&["sweep", "king", "--grid", grid]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("empty grid"));
    }
}

#[test]
fn output_is_byte_stable_and_written_to_file() {
    let args = ["table", "mub", "--d", "2,3,5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let path = std::env::temp_dir().join(format!("clonelab-cli-{}.csv", std::process::id()));
    let out = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_file(path).unwrap();
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn single_check_selection() {
    let out = run(&["verify", "--check", "universal/headline"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema"], 1);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].as_str().unwrap().starts_with("universal/headline"));
        assert_eq!(c["pass"], true);
    }
}

#[test]
fn tolerance_override_is_honored() {
    let sel = ["verify", "--check", "probabilistic/eta-max/s=0.3"];
    let strict = run(&[&sel[..], &["--tol", "0"]].concat());
    let v = report(&strict);
    assert_eq!(v["checks"][0]["tol"], 0.0);
    assert_eq!(strict.status.code(), Some(1));
    assert_eq!(v["checks"][0]["pass"], false);
    let loose = run(&[&sel[..], &["--tol", "0.5"]].concat());
    assert_eq!(loose.status.code(), Some(0));
    assert_eq!(report(&loose)["checks"][0]["tol"], 0.5);
}

#[test]
fn unknown_check_is_a_usage_error() {
    assert_eq!(run(&["verify", "--check", "nonsense"]).status.code(), Some(2));
}

#[test]
fn suite_without_the_disturbance_table_passes() {
    let mut args = vec!["verify"];
    for key in ["universal", "equivalence", "phase", "probabilistic", "king-d2", "sequential", "cv", "telecloning", "properties"] {
        args.extend(["--check", key]);
    }
    let out = run(&args);
    let v = report(&out);
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] != true).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(out.status.code(), Some(0));
}
