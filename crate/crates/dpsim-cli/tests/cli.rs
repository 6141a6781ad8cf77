//! End-to-end tests of the dpsim binary.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dpsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpsim"))
        .args(args)
        .env("DPSIM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dpsim-test-{}-{name}", std::process::id()));
    p
}

/// Parses the probability column out of an emitted CSV.
fn parse_columns(csv: &str) -> (Vec<f64>, Vec<f64>) {
    let table = dpsim_core::table::ScanTable::parse_csv(csv).expect("valid csv");
    (
        table.column("alpha").unwrap(),
        table.column("probability").unwrap(),
    )
}

#[test]
fn profile_single_pulse_cp_limit_matches_sin_squared() {
    let out = dpsim(&[
        "profile", "--family", "none", "--n", "1", "--alpha", "0:2:201", "--engine", "cp-limit",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (alphas, probs) = parse_columns(&stdout_str(&out));
    assert_eq!(alphas.len(), 201);
    for (a, p) in alphas.iter().zip(&probs) {
        let want = (PI * a / 2.0).sin().powi(2);
        assert!((p - want).abs() < 1e-12, "alpha={a}: {p} vs {want}");
    }
}

#[test]
fn profile_bb3_tdse_writes_csv_file() {
    let path = tmp_path("bb3.csv");
    let out = dpsim(&[
        "profile",
        "--family",
        "bb",
        "--n",
        "3",
        "--tau",
        "0.05",
        "--shape",
        "sech",
        "--alpha",
        "0.9:1.1:5",
        "--engine",
        "tdse",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let (_, probs) = parse_columns(&text);
    // the broadband plateau around alpha = 1 at tau = 0.05
    assert!(probs.iter().all(|&p| p > 0.99), "{probs:?}");
    // nominal point frozen golden
    assert!((probs[2] - 0.998_298_717_5).abs() < 1e-7);
}

#[test]
fn order_nb3_reports_sixth_order() {
    let out = dpsim(&[
        "order",
        "--family",
        "nb",
        "--n",
        "3",
        "--at",
        "2.0",
        "--quantity",
        "P",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let slope: f64 = text
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("slope=").and_then(|v| v.parse().ok()))
        .expect("slope field present");
    assert!((slope - 6.0).abs() < 0.3, "slope {slope}");
}

#[test]
fn phase_file_reproduces_bb3() {
    let path = tmp_path("phases.txt");
    std::fs::write(
        &path,
        "# broadband 3-pulse phases\n0\n2.0943951 # 2pi/3\n0\n",
    )
    .unwrap();

    let from_file = dpsim(&[
        "profile",
        "--family",
        "file",
        "--phase-file",
        path.to_str().unwrap(),
        "--alpha",
        "0:2:41",
        "--engine",
        "cp-limit",
    ]);
    std::fs::remove_file(&path).ok();
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );

    let builtin = dpsim(&[
        "profile", "--family", "bb", "--n", "3", "--alpha", "0:2:41", "--engine", "cp-limit",
    ]);
    assert!(builtin.status.success());

    let (_, p_file) = parse_columns(&stdout_str(&from_file));
    let (_, p_bb) = parse_columns(&stdout_str(&builtin));
    for (x, y) in p_file.iter().zip(&p_bb) {
        // the file carries 2pi/3 to 8 digits only
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn empty_phase_file_is_usage_error() {
    let path = tmp_path("empty.txt");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let out = dpsim(&[
        "profile",
        "--family",
        "file",
        "--phase-file",
        path.to_str().unwrap(),
        "--alpha",
        "0:1:3",
        "--engine",
        "cp-limit",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_phase_line_names_line_number() {
    let path = tmp_path("bad.txt");
    std::fs::write(&path, "0\nnot-a-number\n").unwrap();
    let out = dpsim(&[
        "profile",
        "--family",
        "file",
        "--phase-file",
        path.to_str().unwrap(),
        "--alpha",
        "0:1:3",
        "--engine",
        "cp-limit",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2:"), "stderr should name line 2: {err}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = dpsim(&["profile", "--family", "bb", "--does-not-exist"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analytic_engine_with_universal_is_usage_error() {
    let out = dpsim(&[
        "profile",
        "--family",
        "universal",
        "--alpha",
        "0:1:3",
        "--engine",
        "analytic",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("analytic"), "{err}");
}

#[test]
fn scan2d_universal_nominal_point() {
    let out = dpsim(&[
        "scan2d",
        "--family",
        "universal",
        "--alpha",
        "1",
        "--detuning",
        "0",
        "--tau",
        "0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = dpsim_core::table::ScanTable::parse_csv(&stdout_str(&out)).unwrap();
    let p = table.column("probability").unwrap()[0];
    assert!((p - 1.0).abs() < 1e-12);
}

#[test]
fn scan2d_accepts_negative_detuning_range() {
    let out = dpsim(&[
        "scan2d",
        "--family",
        "universal",
        "--alpha",
        "1",
        "--detuning",
        "-0.5:0.5:3",
        "--tau",
        "0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = dpsim_core::table::ScanTable::parse_csv(&stdout_str(&out)).unwrap();
    let dets = table.column("detuning").unwrap();
    assert_eq!(dets, vec![-0.5, 0.0, 0.5]);
}

#[test]
fn profile_accepts_negative_static_detuning() {
    let out = dpsim(&[
        "profile",
        "--family",
        "bb",
        "--n",
        "3",
        "--alpha",
        "1",
        "--engine",
        "cp-limit",
        "--detuning",
        "-0.25",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn width_summary_on_stderr() {
    let out = dpsim(&[
        "width",
        "--family",
        "bb",
        "--n",
        "3",
        "--alpha",
        "0.9:1.1:5",
        "--tau",
        "0.05",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sup |P - P_cp|"), "{err}");
}
