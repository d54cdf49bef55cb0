//! End-to-end tests of the `phaseshift` binary: output bytes, exit codes,
//! and pipeline-friendly formatting.

use std::process::{Command, Output};

fn phaseshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaseshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn phaseshift_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaseshift"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn scalar_outputs_match_known_values() {
    let out = phaseshift(&["deviation", "--theta", "60deg", "--eps", "0.5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.125\n");

    let out = phaseshift(&["zero-point", "--eps", "0.75"]);
    assert_eq!(stdout(&out), "3.141592653589793\n");

    let out = phaseshift(&["threshold", "--theta", "180deg"]);
    assert_eq!(stdout(&out), "0.6\n");

    let out = phaseshift(&["rho", "--theta", "180deg"]);
    assert_eq!(stdout(&out), "3.0\n");

    let out = phaseshift(&["ratio", "--theta", "60deg", "--eps", "0.5"]);
    assert_eq!(stdout(&out), "1.0\n");

    let out = phaseshift(&["classify", "--theta", "0.5", "--eps", "0.9"]);
    assert_eq!(stdout(&out), "above-cube\n");

    let out = phaseshift(&["classify", "--theta", "3.0", "--eps", "0.9"]);
    assert_eq!(stdout(&out), "below-cube\n");
}

#[test]
fn angle_suffixes_and_digit_overrides() {
    let radians = phaseshift(&["deviation", "--theta", "1.0471975511965976rad", "--eps", "0.5"]);
    assert_eq!(stdout(&radians), "0.125\n");

    let digits = phaseshift(&["threshold", "--theta", "90deg", "--digits", "6"]);
    assert_eq!(stdout(&digits), "0.333333\n");

    let kappa = phaseshift(&["kappa", "--range", "0:0.5"]);
    let value: f64 = stdout(&kappa).trim().parse().unwrap();
    assert!((value - 0.16188043160718954).abs() < 1e-12);

    let avg = phaseshift(&["avg-zero-point", "--range", "0:0.5"]);
    let value: f64 = stdout(&avg).trim().parse().unwrap();
    assert!((value - 1.2589117709720787).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&phaseshift(&["deviation", "--theta", "60deg"])), 2);
    assert_eq!(
        code(&phaseshift(&["deviation", "--theta", "abc", "--eps", "0.5"])),
        2
    );
    assert_eq!(code(&phaseshift(&["figures", "--id", "bogus"])), 2);
    assert_eq!(
        code(&phaseshift(&["sweep", "--quantities", "deviation,bogus"])),
        2
    );
    assert_eq!(code(&phaseshift(&["no-such-command"])), 2);
}

#[test]
fn domain_errors_exit_three_with_rule() {
    let out = phaseshift(&["deviation", "--theta", "4.0", "--eps", "0.5"]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("[0, pi]"), "stderr was: {stderr}");

    assert_eq!(
        code(&phaseshift(&["deviation", "--theta", "1.0", "--eps", "1.5"])),
        3
    );
    assert_eq!(code(&phaseshift(&["zero-point", "--eps", "0.8"])), 3);
    assert_eq!(code(&phaseshift(&["kappa", "--range", "0.5:0.2"])), 3);
    assert_eq!(
        code(&phaseshift(&["classify", "--theta", "1.0", "--eps", "0"])),
        3
    );
    assert_eq!(
        code(&phaseshift(&[
            "simulate", "--theta", "1.0", "--eps", "0.5", "--target", "0"
        ])),
        3
    );
}

#[test]
fn recursion_trace_csv_is_exact() {
    let out = phaseshift(&[
        "recurse", "--theta", "60deg", "--eps", "0.9", "--depth", "2",
    ]);
    assert_eq!(
        stdout(&out),
        "m,eps\n0,0.9\n1,0.7290000000000001\n2,0.38742048900000015\n"
    );
}

#[test]
fn sweep_spec_file_drives_the_grid() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("phaseshift-spec-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"theta_grid": [0.0], "eps_grid": [0.25], "quantities": ["deviation"]}"#,
    )
    .unwrap();
    let out = phaseshift(&["sweep", "--spec", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "theta_rad,eps,deviation\n0.0,0.25,0.25\n");
}

#[test]
fn cross_checked_sweep_emits_discrepancy_columns() {
    let out = phaseshift(&[
        "sweep",
        "--theta-points",
        "5",
        "--eps-points",
        "5",
        "--cross-check",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 25);
    for row in rows {
        assert!(row["abs_discrepancy"].as_f64().unwrap() <= 1e-10);
        assert!(row["sim_deviation"].is_number());
    }
}

#[test]
fn sweep_output_is_independent_of_thread_cap() {
    let args = [
        "sweep",
        "--theta-points",
        "7",
        "--eps-points",
        "5",
        "--cross-check",
        "4",
        "--quantities",
        "deviation,gap",
    ];
    let single = phaseshift_with_env(&args, "PHASESHIFT_THREADS", "1");
    let several = phaseshift_with_env(&args, "PHASESHIFT_THREADS", "3");
    assert_eq!(code(&single), 0);
    assert_eq!(stdout(&single), stdout(&several));
}

#[test]
fn figures_emit_expected_shapes() {
    let out = phaseshift(&["figures", "--id", "zero_locus"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_rad,eps,deviation"));
    assert_eq!(lines.count(), 75);

    let out = phaseshift(&["figures", "--id", "rho_curve", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 181);
}

#[test]
fn tables_report_passes_in_both_formats() {
    let text = phaseshift(&["tables"]);
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("all tables reproduced"));

    let json = phaseshift(&["tables", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(report["all_passed"], true);
    assert_eq!(report["tables"].as_array().unwrap().len(), 4);
}

#[test]
fn output_flag_writes_the_file_and_keeps_stdout_clean() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("phaseshift-sweep-{}.csv", std::process::id()));
    let out = phaseshift(&[
        "sweep",
        "--theta-points",
        "3",
        "--eps-points",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("theta_rad,eps,deviation\n"));
    assert_eq!(written.lines().count(), 10);
}

#[test]
fn verify_runs_the_whole_suite() {
    let out = phaseshift(&["verify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("all checks passed"), "output was: {text}");
    assert_eq!(text.matches("PASS").count(), 24);
    assert_eq!(text.matches("FAIL").count(), 0);
}
