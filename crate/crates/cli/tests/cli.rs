use std::path::Path;
use std::process::{Command, Output};

fn qrma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = qrma(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and numeric rows; empty cells become NaN.
fn csv(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    if c.is_empty() {
                        f64::NAN
                    } else {
                        c.parse().unwrap()
                    }
                })
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn spectrum_at_zero_coupling_is_the_uncoupled_ladder() {
    let (header, rows) = csv(&stdout_ok(&[
        "spectrum",
        "--f",
        "0",
        "--levels",
        "4",
        "--big-delta",
        "2",
    ]));
    assert_eq!(header, "f,parity,level,E_exact,E_rwar");
    assert_eq!(rows.len(), 8);
    // Δ = 2: even sector holds |↑,2m⟩ at 2m+1 and |↓,2m+1⟩ at 2m; odd the rest
    let even: Vec<f64> = rows.iter().filter(|r| r[1] == 1.0).map(|r| r[3]).collect();
    let odd: Vec<f64> = rows.iter().filter(|r| r[1] == -1.0).map(|r| r[3]).collect();
    assert_eq!(even, vec![0.0, 1.0, 2.0, 3.0]);
    assert_eq!(odd, vec![-1.0, 1.0, 2.0, 3.0]);
    for r in &rows {
        assert_eq!(r[3], r[4]);
    }
}

#[test]
fn spectrum_ground_column_rises_with_coupling() {
    let (_, rows) = csv(&stdout_ok(&["spectrum", "--levels", "6"]));
    assert_eq!(rows.len(), 101 * 12);
    let ground: Vec<f64> = rows
        .chunks(12)
        .map(|c| c.iter().map(|r| r[3]).fold(f64::INFINITY, f64::min))
        .collect();
    assert!(ground.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn ground_command() {
    let (header, rows) = csv(&stdout_ok(&["ground", "--f-steps", "5"]));
    assert_eq!(header, "f,parity,E_exact,E_rwar");
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][1], -1.0);
    for r in &rows {
        assert!(r[2] <= r[3] + 1e-12);
    }
}

#[test]
fn photon_columns() {
    let (header, rows) = csv(&stdout_ok(&[
        "photon",
        "--osc-delta",
        "0",
        "--f-steps",
        "11",
    ]));
    assert_eq!(header, "f,n_exact,n_rwa");
    assert!(rows.iter().all(|r| r[2] == 0.0 && r[1] >= 0.0));

    let (_, rows) = csv(&stdout_ok(&["photon", "--f", "0.5"]));
    assert!((rows[0][2] - 0.030_330_085_889_910_65).abs() < 1e-12);
    assert!(rows[0][1] >= 0.0);
}

#[test]
fn dynamics_starts_at_one_and_stays_bounded() {
    let (header, rows) = csv(&stdout_ok(&[
        "dynamics",
        "--f",
        "0.2",
        "--epsilon",
        "5",
        "--t-max",
        "100",
        "--samples",
        "400",
    ]));
    assert_eq!(header, "t,w_exact,w_rwa");
    assert_eq!(rows.len(), 400);
    assert!((rows[0][1] - 1.0).abs() < 1e-6);
    assert!((rows[0][2] - 1.0).abs() < 1e-6);
    assert_eq!(rows[399][0], 100.0);
    for r in &rows {
        assert!(r.iter().all(|x| x.is_finite()));
        assert!(r[1].abs() <= 1.0 + 1e-6 && r[2].abs() <= 1.0 + 1e-6);
    }
}

#[test]
fn dynamics_without_coupling_is_constant() {
    let (_, rows) = csv(&stdout_ok(&["dynamics", "--f", "0", "--samples", "50"]));
    for r in &rows {
        assert!((r[1] - 1.0).abs() < 1e-12);
        assert!((r[2] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn wspec_short_and_long() {
    let (header, rows) = csv(&stdout_ok(&[
        "wspec",
        "--f",
        "0.1",
        "--samples",
        "256",
        "--window",
        "hann",
    ]));
    assert_eq!(header, "omega,mag_exact,mag_rwa");
    assert_eq!(rows.len(), 129);
    assert_eq!(rows[0][0], 0.0);
    assert!(rows.iter().all(|r| r[1] >= 0.0 && r[2] >= 0.0));

    let (header, rows) = csv(&stdout_ok(&[
        "wspec",
        "--long",
        "--series",
        "rwa",
        "--f-min",
        "0.02",
        "--f-max",
        "0.04",
        "--f-steps",
        "3",
        "--samples",
        "64",
    ]));
    assert_eq!(header, "f,omega,mag");
    assert_eq!(rows.len(), 3 * 33);
    assert_eq!(rows[33][0], 0.03);
}

#[test]
fn crossings_table() {
    let (header, rows) = csv(&stdout_ok(&[
        "crossings",
        "--osc-delta",
        "0",
        "--f-max",
        "5",
        "--f-steps",
        "51",
        "--levels",
        "1",
    ]));
    assert_eq!(header, "n,f_star_rwa,f_star_exact");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - (3f64.sqrt() + 1.0)).abs() < 1e-8);
    assert!(rows[0][2].is_nan());

    let empty = stdout_ok(&["crossings", "--f-min", "2", "--f-max", "1"]);
    assert_eq!(empty, "n,f_star_rwa,f_star_exact\n");
    let none = stdout_ok(&[
        "crossings",
        "--f-max",
        "5",
        "--f-steps",
        "51",
        "--levels",
        "1",
    ]);
    assert_eq!(none, "n,f_star_rwa,f_star_exact\n");
}

#[test]
fn json_output() {
    let text = stdout_ok(&["ground", "--f-steps", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["f"], 1.0);
    assert_eq!(v[0]["parity"], -1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"f_min": 0.5, "f_max": 0.5, "f_steps": 1, "osc_delta": 0}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, from_file) = csv(&stdout_ok(&["photon", "--config", cfg]));
    assert_eq!(from_file.len(), 1);
    assert_eq!(from_file[0][2], 0.0);
    let (_, overridden) = csv(&stdout_ok(&["photon", "--config", cfg, "--osc-delta", "1"]));
    assert!((overridden[0][2] - 0.030_330_085_889_910_65).abs() < 1e-12);
}

#[test]
fn out_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = qrma(&["ground", "--f-steps", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout_ok(&["ground", "--f-steps", "3"]));
}

#[test]
fn exit_codes() {
    assert_eq!(
        qrma(&["spectrum", "--osc-delta", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qrma(&["spectrum", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(qrma(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        qrma(&["ground", "--config", "/nonexistent/cfg.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qrma(&["ground", "--f", "3", "--n-max", "8"]).status.code(),
        Some(3)
    );
    assert_eq!(
        qrma(&["dynamics", "--f", "0.2", "--n-max", "16"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"levels": 3, "colour": "blue"}"#).unwrap();
    assert_eq!(
        qrma(&["ground", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing_dir = Path::new("/nonexistent/dir/out.csv");
    assert_eq!(
        qrma(&[
            "ground",
            "--f-steps",
            "2",
            "--out",
            missing_dir.to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
}
