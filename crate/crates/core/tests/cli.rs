use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alpha-bridge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output, skipping `#` lines and the header.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn eigen_csv_matches_wiener_bridge() {
    let o = run(&[
        "eigen", "--alpha", "1", "--T", "1", "--count", "3", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "k,lambda");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        let k = (i + 1) as f64;
        assert_eq!(row[0], (i + 1).to_string());
        let lambda: f64 = row[1].parse().unwrap();
        let exact = 1.0 / (k * PI).powi(2);
        assert!(((lambda - exact) / exact).abs() < 1e-14);
    }
}

#[test]
fn rayleigh_reports_exact_value() {
    let o = run(&["rayleigh", "--alpha", "1.5", "--N", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let partial: f64 = rows[0][1].parse().unwrap();
    let exact: f64 = rows[0][2].parse().unwrap();
    assert_eq!(exact, 0.125);
    assert!(partial < exact && exact - partial < 1e-3);
}

#[test]
fn simulate_is_byte_identical() {
    for method in ["spacetime", "euler", "kl"] {
        let args = [
            "simulate", "--alpha", "0.5", "--T", "1", "--method", method, "--paths", "2", "--grid",
            "8", "--seed", "42",
        ];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{method}");
        assert_eq!(
            csv_rows(&stdout(&a)).len(),
            2 * 9 - if method == "kl" { 2 } else { 0 }
        );
    }
    let a = run(&[
        "simulate", "--alpha", "0.5", "--paths", "2", "--grid", "8", "--seed", "1",
    ]);
    let b = run(&[
        "simulate", "--alpha", "0.5", "--paths", "2", "--grid", "8", "--seed", "2",
    ]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn json_carries_meta_and_data() {
    let o = run(&[
        "simulate",
        "--alpha",
        "0.7",
        "--T",
        "2",
        "--method",
        "weighted-kl",
        "--S",
        "1",
        "--N",
        "50",
        "--grid",
        "4",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let meta = &v["meta"];
    assert_eq!(meta["seed"], 9);
    assert_eq!(meta["alpha"], 0.7);
    assert_eq!(meta["T"], 2.0);
    assert_eq!(meta["S"], 1.0);
    assert_eq!(meta["truncation"], 50);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    let data = v["data"].as_array().unwrap();
    assert_eq!(data.len(), 4);
    assert_eq!(data[3]["t"], 1.0);
}

#[test]
fn survival_warning_surfaces_in_both_formats() {
    let o = run(&["survival", "--alpha", "3", "--x", "0.001", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# warning:")));
    assert!(text.contains("not_decreasing"));

    let o = run(&[
        "survival", "--alpha", "3", "--x", "0.001", "--N", "3", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    assert!(!v["data"][0]["warning"].as_str().unwrap().is_empty());

    let o = run(&["survival", "--alpha", "1", "--x", "0.1"]);
    assert!(!stdout(&o).contains("# warning"));
}

#[test]
fn laplace_and_tails() {
    let o = run(&["laplace", "--alpha", "1", "--c", "0.5,2"]);
    let rows = csv_rows(&stdout(&o));
    for (row, c) in rows.iter().zip([0.5f64, 2.0]) {
        let a = (2.0 * c).sqrt();
        let v: f64 = row[1].parse().unwrap();
        assert!((v - (a / a.sinh()).sqrt()).abs() < 1e-9);
    }
    let o = run(&["laplace", "--alpha", "0.5", "--S", "0.5", "--c", "0.5"]);
    let rows = csv_rows(&stdout(&o));
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - 1.0 / 1.25f64.sqrt()).abs() < 1e-15);

    let o = run(&["tails", "--alpha", "1", "--x", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let s: f64 = rows[0][1].parse().unwrap();
    let ld: f64 = rows[0][2].parse().unwrap();
    assert!((s / ld - 1.0).abs() < 0.02);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "bessel"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("closed-form J_{1/2}"));
    assert!(text.contains("McMahon residual"));
    assert!(csv_rows(&text).iter().all(|r| r.last().unwrap() == "true"));

    let o = run(&["verify", "--suite", "normsq", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let check = v["data"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "Fredholm derivative identity")
        .unwrap();
    assert_eq!(check["passed"], true);
    assert_eq!(check["tolerance"], 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eigen", "--T", "1"],
        vec!["eigen", "--alpha", "0"],
        vec!["eigen", "--alpha", "-1"],
        vec!["eigen", "--alpha", "1", "--S", "2"],
        vec!["eigen", "--alpha", "1", "--bogus", "3"],
        vec!["simulate", "--alpha", "1", "--method", "brownian"],
        vec!["simulate", "--alpha", "1", "--method", "weighted-kl"],
        vec!["survival", "--alpha", "1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains("usage: alpha-bridge"), "{args:?}: {err}");
    }
    let err = String::from_utf8(run(&["eigen", "--alpha", "1", "--bogus", "3"]).stderr).unwrap();
    assert!(err.contains("--bogus"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("alpha-bridge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eigen.csv");
    let o = run(&[
        "eigen",
        "--alpha",
        "2",
        "--count",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&text).len(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
