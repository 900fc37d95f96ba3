//! End-to-end tests of the binary: flag handling, exit codes, output
//! shapes, and the numeric contracts of each subcommand.

use std::process::{Command, Output};

fn altchoice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altchoice"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout_of(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

fn result_f64(record: &serde_json::Value, key: &str) -> f64 {
    record["results"][key]
        .as_f64()
        .unwrap_or_else(|| panic!("missing numeric result `{key}` in {record}"))
}

#[test]
fn threshold_half_rule_and_inv_e() {
    let out = altchoice(&["threshold", "--k", "2"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("\"t\":5.000000000000e-1"));

    let out = altchoice(&["threshold", "--k", "1"]);
    assert!(stdout_of(&out).contains("\"t\":3.678794411714e-1"));
}

#[test]
fn threshold_k_zero_is_usage_error() {
    let out = altchoice(&["threshold", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert_eq!(err.lines().count(), 1, "one-line diagnostic: {err}");
    assert!(err.contains("k must be at least 1"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = altchoice(&["threshold", "--k", "2", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_record_carries_format_version() {
    for args in [
        vec!["threshold", "--k", "3"],
        vec!["bound", "--k", "2", "--t", "0.25"],
        vec!["exact", "--classes", "2,2", "--t", "0.4"],
    ] {
        let out = altchoice(&args);
        assert!(out.status.success());
        for record in json_lines(&out) {
            assert_eq!(record["format_version"], "altchoice.v1", "args {args:?}");
        }
    }
}

#[test]
fn bound_point_values() {
    let out = altchoice(&["bound", "--k", "2", "--t", "0.5"]);
    assert!(stdout_of(&out).contains("\"h\":5.000000000000e-1"));

    let out = altchoice(&["bound", "--k", "2", "--t", "0.25"]);
    assert!(stdout_of(&out).contains("\"h\":3.750000000000e-1"));
}

#[test]
fn bound_grid_csv_has_five_rows_with_zero_endpoints() {
    let out = altchoice(&["bound", "--k", "3", "--grid", "0:1:0.25", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "t,h");
    let h_of = |line: &str| line.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert_eq!(h_of(lines[1]), 0.0);
    assert_eq!(h_of(lines[5]), 0.0);
}

#[test]
fn bound_requires_t_xor_grid() {
    let neither = altchoice(&["bound", "--k", "2"]);
    assert_eq!(neither.status.code(), Some(2));
    let both = altchoice(&["bound", "--k", "2", "--t", "0.5", "--grid", "0:1:0.5"]);
    assert_eq!(both.status.code(), Some(2));
    let bad_t = altchoice(&["bound", "--k", "2", "--t", "1.5"]);
    assert_eq!(bad_t.status.code(), Some(2));
}

#[test]
fn exact_known_values() {
    let out = altchoice(&["exact", "--classes", "1,1", "--t", "0.5"]);
    assert!(stdout_of(&out).contains("\"value\":7.500000000000e-1"));

    let out = altchoice(&["exact", "--classes", "1", "--t", "0.3"]);
    assert!(stdout_of(&out).contains("\"value\":7.000000000000e-1"));
}

#[test]
fn exact_agrees_with_simulation_within_four_standard_errors() {
    let exact = result_f64(
        &json_lines(&altchoice(&["exact", "--classes", "5,5", "--t", "0.5"]))[0],
        "value",
    );
    assert!(exact >= 0.5);

    let sim = &json_lines(&altchoice(&[
        "simulate",
        "--classes",
        "5,5",
        "--t",
        "0.5",
        "--trials",
        "200000",
        "--seed",
        "17",
    ]))[0];
    let rate = result_f64(sim, "success_rate");
    let std_err = result_f64(sim, "std_err");
    assert!(
        (rate - exact).abs() < 4.0 * std_err,
        "simulate {rate} vs exact {exact}"
    );
}

#[test]
fn exact_bad_classes_is_usage_error() {
    for classes in ["", "0", "2,x", "3,0,1"] {
        let out = altchoice(&["exact", "--classes", classes, "--t", "0.5"]);
        assert_eq!(out.status.code(), Some(2), "classes `{classes}`");
    }
}

#[test]
fn exact_unreachable_tolerance_is_numerical_error() {
    let out = altchoice(&[
        "exact",
        "--classes",
        "3,4",
        "--t",
        "0.3",
        "--quad-panels",
        "8",
        "--quad-tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("error estimate"));
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let args = [
        "simulate",
        "--classes",
        "1,1",
        "--t",
        "0.5",
        "--trials",
        "50000",
        "--seed",
        "42",
    ];
    let a = altchoice(&args);
    let b = altchoice(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn simulate_results_do_not_depend_on_worker_count() {
    let base = [
        "simulate",
        "--classes",
        "2,3",
        "--t",
        "0.4",
        "--trials",
        "40000",
        "--seed",
        "9",
    ];
    let mut with_one = base.to_vec();
    with_one.extend(["--workers", "1"]);
    let mut with_seven = base.to_vec();
    with_seven.extend(["--workers", "7"]);
    let one = json_lines(&altchoice(&with_one));
    let seven = json_lines(&altchoice(&with_seven));
    assert_eq!(one[0]["results"], seven[0]["results"]);
}

#[test]
fn simulate_matches_exact_oracle() {
    let record = &json_lines(&altchoice(&[
        "simulate",
        "--classes",
        "1,1",
        "--t",
        "0.5",
        "--trials",
        "100000",
        "--seed",
        "42",
    ]))[0];
    let rate = result_f64(record, "success_rate");
    let std_err = result_f64(record, "std_err");
    assert!((rate - 0.75).abs() < 4.0 * std_err);
    let trials = record["results"]["trials"].as_u64().unwrap();
    let sum = record["results"]["successes"].as_u64().unwrap()
        + record["results"]["failures"].as_u64().unwrap()
        + record["results"]["no_stops"].as_u64().unwrap();
    assert_eq!(sum, trials);
}

#[test]
fn simulate_single_class_no_stop_is_inv_e() {
    let record = &json_lines(&altchoice(&[
        "simulate",
        "--classes",
        "100",
        "--t",
        "0.367879441",
        "--trials",
        "100000",
        "--seed",
        "5",
    ]))[0];
    let inv_e = (-1.0f64).exp();
    let no_stop = result_f64(record, "no_stop_rate");
    let se = (inv_e * (1.0 - inv_e) / 100_000.0).sqrt();
    assert!(
        (no_stop - inv_e).abs() < 4.0 * se,
        "no-stop rate {no_stop} vs 1/e"
    );
    assert!(result_f64(record, "success_rate") >= inv_e - 4.0 * result_f64(record, "std_err"));
}

#[test]
fn sweep_csv_shape_and_dominance() {
    let out = altchoice(&[
        "sweep",
        "--classes",
        "3,3",
        "--grid",
        "0:1:0.25",
        "--trials",
        "50000",
        "--seed",
        "13",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "t,success_rate,ci_low,ci_high,no_stop_rate,exact,h_bound"
    );
    assert_eq!(lines.len(), 6);

    let parse_row =
        |line: &str| -> Vec<f64> { line.split(',').map(|v| v.parse::<f64>().unwrap()).collect() };
    for line in &lines[1..] {
        let row = parse_row(line);
        let (success, ci_low, exact, h_bound) = (row[1], row[2], row[5], row[6]);
        // Exact curve dominates the analytic bound everywhere.
        assert!(exact >= h_bound - 1e-9, "row {line}");
        // The empirical CI stays consistent with the exact value.
        assert!(ci_low <= exact + 1e-9, "row {line}");
        let trials = 50_000.0;
        let se = (success * (1.0 - success) / trials).sqrt();
        assert!(success >= h_bound - 4.0 * se.max(1e-9), "row {line}");
    }
    // Final row sits at t = 1: no arrival can occur at or after the horizon.
    let last = parse_row(lines[5]);
    assert_eq!(last[0], 1.0);
    assert_eq!(last[1], 0.0);
    assert_eq!(last[4], 1.0);
}

#[test]
fn sweep_json_and_csv_contain_identical_numbers() {
    let args = [
        "sweep",
        "--classes",
        "2,2",
        "--grid",
        "0.2:0.8:0.3",
        "--trials",
        "20000",
        "--seed",
        "3",
    ];
    let json_out = altchoice(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_out = altchoice(&csv_args);

    let records = json_lines(&json_out);
    let csv_text = stdout_of(&csv_out);
    let csv_rows: Vec<&str> = csv_text.lines().skip(1).collect();
    assert_eq!(records.len(), csv_rows.len());
    for (record, row) in records.iter().zip(csv_rows) {
        let cells: Vec<&str> = row.split(',').collect();
        for (i, key) in [
            "t",
            "success_rate",
            "ci_low",
            "ci_high",
            "no_stop_rate",
            "exact",
            "h_bound",
        ]
        .iter()
        .enumerate()
        {
            assert_eq!(
                record["results"][*key].to_string(),
                cells[i],
                "field {key} differs between JSON and CSV"
            );
        }
    }
}

#[test]
fn sweep_writes_output_file() {
    let dir = std::env::temp_dir().join("altchoice-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let out = altchoice(&[
        "sweep",
        "--classes",
        "1,1",
        "--grid",
        "0:1:0.5",
        "--trials",
        "5000",
        "--seed",
        "1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("t,success_rate,"));
    assert_eq!(content.lines().count(), 4);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn unwritable_output_file_is_io_error() {
    let out = altchoice(&[
        "threshold",
        "--k",
        "2",
        "--out",
        "/nonexistent-dir/sub/out.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn best_or_worst_degenerate_and_certain_cases() {
    let single = &json_lines(&altchoice(&[
        "best-or-worst",
        "--n",
        "1",
        "--t",
        "0.5",
        "--trials",
        "1000",
        "--seed",
        "2",
    ]))[0];
    assert_eq!(result_f64(single, "success_rate"), 0.0);
    assert_eq!(result_f64(single, "degenerate_rate"), 1.0);

    let pair = &json_lines(&altchoice(&[
        "best-or-worst",
        "--n",
        "2",
        "--t",
        "0",
        "--trials",
        "5000",
        "--seed",
        "2",
    ]))[0];
    assert_eq!(result_f64(pair, "success_rate"), 1.0);
}

#[test]
fn best_or_worst_zero_items_is_usage_error() {
    let out = altchoice(&["best-or-worst", "--n", "0", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_k1_endpoints_are_positive_zero() {
    let out = altchoice(&["bound", "--k", "1", "--grid", "0:1:0.5", "--format", "csv"]);
    let text = stdout_of(&out);
    assert!(!text.contains("-0."), "negative zero leaked into output: {text}");
}

#[test]
fn best_or_worst_reports_target_split() {
    let record = &json_lines(&altchoice(&[
        "best-or-worst",
        "--n",
        "50",
        "--t",
        "0.5",
        "--trials",
        "50000",
        "--seed",
        "11",
    ]))[0];
    let successes = record["results"]["successes"].as_u64().unwrap();
    let best = record["results"]["best_hits"].as_u64().unwrap();
    let worst = record["results"]["worst_hits"].as_u64().unwrap();
    assert_eq!(successes, best + worst);
    assert!(best > 0 && worst > 0);
}

#[test]
fn optimize_analytic_bound_recovers_known_thresholds() {
    let record = &json_lines(&altchoice(&[
        "optimize",
        "--k",
        "4",
        "--objective",
        "analytic-bound",
    ]))[0];
    let t_star = result_f64(record, "t_star");
    assert!((t_star - 4f64.powf(-1.0 / 3.0)).abs() < 1e-6);

    let record = &json_lines(&altchoice(&[
        "optimize",
        "--k",
        "1",
        "--objective",
        "analytic-bound",
    ]))[0];
    let t_star = result_f64(record, "t_star");
    assert!((t_star - (-1.0f64).exp()).abs() < 1e-6);
}

#[test]
fn optimize_exact_two_singletons_picks_zero() {
    let record = &json_lines(&altchoice(&[
        "optimize",
        "--classes",
        "1,1",
        "--objective",
        "exact",
    ]))[0];
    assert_eq!(result_f64(record, "t_star"), 0.0);
    assert_eq!(record["results"]["method"], "dense-grid-fallback");
}

#[test]
fn optimize_requires_counts_for_exact_objective() {
    let out = altchoice(&["optimize", "--k", "2", "--objective", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--classes"));
}

#[test]
fn optimize_rejects_k_alongside_classes() {
    let out = altchoice(&[
        "optimize",
        "--k",
        "2",
        "--classes",
        "1,1",
        "--objective",
        "analytic-bound",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
