use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impurity-chain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and data rows, skipping `#` comment lines.
fn table(text: &str) -> (String, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

fn footer(text: &str) -> Value {
    let line = text.lines().rev().find(|l| l.starts_with("# ")).unwrap();
    serde_json::from_str(&line[2..]).unwrap()
}

#[test]
fn spectrum_sweep_has_two_states_per_point() {
    let o = bin(&["spectrum", "--t0", "0.5", "--v0-sweep", "-2:0:201"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, "v0,t0,class,re_k,im_k,re_e,im_e,transition_flag");
    assert_eq!(rows.len(), 402);
    assert!(rows.iter().all(|r| r.len() == 8));
    let v0s: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    assert!(v0s.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(v0s[0], -2.0);
    assert_eq!(v0s[401], 0.0);
    // Two signature changes, at the band edge and at the exceptional point.
    let flagged: Vec<f64> = rows
        .iter()
        .filter(|r| r[7] == "1")
        .map(|r| num(&r[0]))
        .collect();
    assert_eq!(flagged.len(), 4);
    assert!((flagged[0] + 1.49).abs() < 1e-12 && (flagged[2] + 1.41).abs() < 1e-12);
}

#[test]
fn spectrum_single_point() {
    let o = bin(&["spectrum", "--t0", "0.5", "--v0", "-0.8"]);
    let (_, rows) = table(&stdout(&o));
    let classes: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(classes, ["Resonant", "AntiResonant"]);
    assert_eq!(rows[0][0], "-8.0000000000000004e-1");
    assert!((num(&rows[0][6]) + 0.5830951894845301).abs() < 1e-15);
}

#[test]
fn spectrum_at_exceptional_point() {
    let o = bin(&["spectrum", "--t0", "0.5", "--v0", "-1.4142135623730951"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = table(&stdout(&o));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[2] == "Degenerate"));
}

#[test]
fn spectrum_output_is_byte_stable() {
    let args = ["spectrum", "--t0", "0.3", "--v0-sweep", "-3:3:57"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
    let args = [
        "survival", "--t0", "0.5", "--v0", "-0.8", "--tmax", "5", "--nt", "21",
    ];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}

#[test]
fn survival_both_methods_agree() {
    let o = bin(&[
        "survival", "--t0", "0.5", "--v0", "-0.8", "--tmax", "40", "--nt", "801", "--method",
        "both",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (header, rows) = table(&stdout(&o));
    assert_eq!(
        header,
        "t,re_a,im_a,abs2_a,abs2_chi_res,abs2_chi_ar,abs2_chi_other,discrepancy"
    );
    assert_eq!(rows.len(), 801);
    let max_disc = rows.iter().map(|r| num(&r[7])).fold(0.0, f64::max);
    assert!(max_disc < 1e-6);
    assert_eq!(num(&rows[400][0]), 0.0);
    assert!((num(&rows[400][3]) - 1.0).abs() < 1e-10);
    for i in 0..801 {
        let (res, ar) = (num(&rows[i][4]), num(&rows[800 - i][5]));
        assert!((res - ar).abs() < 1e-12 * res.max(1e-3), "row {i}");
        assert_eq!(num(&rows[i][6]), 0.0);
    }
}

#[test]
fn survival_lattice_only_leaves_component_columns_empty() {
    let o = bin(&[
        "survival", "--t0", "0.5", "--v0", "-0.8", "--tmax", "3", "--nt", "3", "--method",
        "lattice",
    ]);
    let (_, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r[4].is_empty() && r[5].is_empty() && r[6].is_empty() && r[7].is_empty()));
}

#[test]
fn survival_in_bound_regime_uses_other_column() {
    let o = bin(&[
        "survival", "--t0", "0.5", "--v0", "-2", "--tmax", "4", "--nt", "5", "--method", "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = table(&stdout(&o));
    for r in &rows {
        assert!(r[4].is_empty() && r[5].is_empty());
        assert!(num(&r[6]) > 0.0);
        assert!(num(&r[7]) < 1e-9);
    }
}

#[test]
fn state_of_resonance() {
    let o = bin(&[
        "state", "--t0", "0.5", "--v0", "-0.8", "--which", "res", "--L", "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (header, rows) = table(&text);
    assert_eq!(header, "x,re_psi,im_psi");
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[0][0], "-20");
    let summary = footer(&text);
    let pn = summary["partial_norm"].as_f64().unwrap();
    assert!((pn - 2f64.powi(20)).abs() / 2f64.powi(20) < 1e-10);
    assert!(summary["conservation_residual"].as_f64().unwrap() < 1e-5);
    let (jl, jr) = (
        summary["j_left"].as_f64().unwrap(),
        summary["j_right"].as_f64().unwrap(),
    );
    assert!(jr > 0.0 && (jl + jr).abs() < 1e-12 * jr);
    assert!(summary["quadratic_form"]["im"].as_f64().unwrap() < 0.0);
}

#[test]
fn state_of_bound_state() {
    let o = bin(&[
        "state", "--t0", "0.5", "--v0", "-2", "--which", "bound", "--L", "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary = footer(&stdout(&o));
    let q = &summary["quadratic_form"];
    assert!(q["im"].as_f64().unwrap().abs() < 1e-12);
    assert!(summary["conservation_residual"].is_null());
}

#[test]
fn state_class_absent() {
    let o = bin(&[
        "state", "--t0", "0.5", "--v0", "-0.8", "--which", "bound", "--L", "20",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let o = bin(&[
        "state", "--t0", "0.5", "--v0", "-1.45", "--which", "abound", "--index", "1", "--L", "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(&[
        "state", "--t0", "0.5", "--v0", "-1.45", "--which", "abound", "--index", "2", "--L", "4",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ratio_table() {
    let o = bin(&[
        "ratio", "--t0", "0.5", "--v0", "-0.8", "--tmax", "40", "--nt", "401",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, "t,ratio");
    assert_eq!(rows.len(), 401);
    let r: Vec<f64> = rows.iter().map(|row| num(&row[1])).collect();
    assert!((r[200] - 1.0).abs() < 1e-8);
    for i in 0..401 {
        assert!((r[i] * r[400 - i] - 1.0).abs() < 1e-6, "row {i}");
    }
    // Rises from 1 up to t = 1.4 and stays above 1 through t = 7.4; later the
    // band-edge background makes it oscillate.
    assert!(r[200..=207].windows(2).all(|w| w[1] > w[0]));
    assert!(r[201..=237].iter().all(|&v| v > 1.0));
}

#[test]
fn validate_reports() {
    let o = bin(&["validate", "--t0", "0.5", "--v0", "-0.8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    assert!(report["checks"].as_array().unwrap().len() >= 10);

    let o = bin(&["validate", "--t0", "0.5", "--v0", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let completeness = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "decomposition_completeness")
        .unwrap();
    assert!(completeness["detail"]
        .as_str()
        .unwrap()
        .contains("Bound+AntiBound"));

    let o = bin(&["validate", "--t0", "0.7071067811865476", "--v0", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn flag_errors_exit_two_without_output() {
    for args in [
        &["spectrum", "--t0", "0.5", "--v0-sweep", "-2:0:1"][..],
        &[
            "spectrum",
            "--t0",
            "0.5",
            "--v0",
            "1",
            "--v0-sweep",
            "-2:0:5",
        ],
        &[
            "survival", "--t0", "0.5", "--v0", "-0.8", "--method", "fast",
        ],
        &["survival", "--t0", "0.5", "--v0", "-0.8", "--nt", "1"],
        &["state", "--t0", "0.5", "--v0", "-0.8", "--which", "res"],
        &["ratio", "--t0", "0.5"],
        &[
            "validate",
            "--t0",
            "0.5",
            "--v0",
            "-0.8",
            "--horizon-safety",
            "1.5",
        ],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn horizon_and_convergence_exit_codes() {
    let o = bin(&[
        "survival",
        "--t0",
        "0.5",
        "--v0",
        "-0.8",
        "--tmax",
        "40",
        "--nt",
        "3",
        "--method",
        "both",
        "--oracle-l",
        "60",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(o.stdout.is_empty());
    let o = bin(&[
        "survival",
        "--t0",
        "0.5",
        "--v0",
        "-0.8",
        "--tmax",
        "300",
        "--nt",
        "3",
        "--n-points",
        "64",
        "--max-doublings",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn out_file_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum.csv");
    let o = bin(&[
        "spectrum",
        "--t0",
        "0.5",
        "--v0",
        "-0.8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        written,
        stdout(&bin(&["spectrum", "--t0", "0.5", "--v0", "-0.8"]))
    );

    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"t0": 0.5, "v0": -2.0, "which": "bound", "L": 6, "format": "json"}"#,
    )
    .unwrap();
    let o = bin(&["state", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["samples"].as_array().unwrap().len(), 13);
    assert_eq!(doc["summary"]["class"], "Bound");

    // Flags win over the file.
    let o = bin(&[
        "state",
        "--config",
        cfg.to_str().unwrap(),
        "--v0",
        "-0.8",
        "--which",
        "res",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(footer(&stdout(&o))["class"], "Resonant");

    std::fs::write(&cfg, r#"{"t0": 0.5, "v0": -0.8, "colour": "red"}"#).unwrap();
    let o = bin(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_mirrors_csv() {
    let o = bin(&[
        "spectrum", "--t0", "0.5", "--v0", "-0.8", "--format", "json",
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for key in [
        "v0",
        "t0",
        "class",
        "re_k",
        "im_k",
        "re_e",
        "im_e",
        "transition_flag",
    ] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }
    let o = bin(&[
        "ratio", "--t0", "0.5", "--v0", "-0.8", "--tmax", "2", "--nt", "5", "--format", "json",
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"][2]["ratio"].as_f64().unwrap(), 1.0);
}
