//! End-to-end tests of the `chball` binary: output contracts, exit codes,
//! and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chball"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_matrix(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).expect("create file");
    f.write_all(contents.as_bytes()).expect("write file");
    path.to_str().expect("utf-8 path").to_string()
}

/// `boost(2, e_1)` in complex dimension 2: hyperbolic block
/// [[5/4, 3/4], [3/4, 5/4]] on coordinates (0, 2), identity elsewhere.
const BOOST_2_E1: &str = r#"{"n": 2, "mat": [
    [1.25, 0], [0, 0], [0.75, 0],
    [0, 0],   [1, 0], [0, 0],
    [0.75, 0], [0, 0], [1.25, 0]
]}"#;

const IDENTITY_2: &str = r#"{"n": 2, "mat": [
    [1, 0], [0, 0], [0, 0],
    [0, 0], [1, 0], [0, 0],
    [0, 0], [0, 0], [1, 0]
]}"#;

/// Twice the identity: parses but violates both the form and the
/// determinant condition.
const SCALED_IDENTITY_2: &str = r#"{"n": 2, "mat": [
    [2, 0], [0, 0], [0, 0],
    [0, 0], [2, 0], [0, 0],
    [0, 0], [0, 0], [2, 0]
]}"#;

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

#[test]
fn bounds_csv_has_header_and_one_row_per_dimension() {
    let out = run(&["bounds", "--format", "csv", "--no-header"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // Header row plus dimensions 2..=12.
    assert_eq!(lines.len(), 12, "expected 1 header + 11 data rows");
    assert!(lines[0].starts_with("n,quality,delta,ball_radius,bound,omega,feasible"));
    for (i, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("{},", i + 2)), "row {line}");
    }
}

#[test]
fn bounds_first_row_contains_reference_radius_and_bound() {
    let out = run(&[
        "bounds",
        "--n",
        "2",
        "--n-max",
        "2",
        "--format",
        "csv",
        "--no-header",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).expect("data row");
    // r_2 = 0.01 / 17, the bound value ~0.38347, and the threshold ~0.38546,
    // all at 10 significant digits.
    assert!(row.contains("5.882352941e-4"), "radius in {row}");
    assert!(row.contains("3.834730599e-1"), "bound in {row}");
    assert!(row.contains("3.854584985e-1"), "omega in {row}");
    assert!(row.contains("true"), "feasible in {row}");
}

#[test]
fn bounds_json_lines_rows_parse_as_objects() {
    let out = run(&["bounds", "--format", "json-lines", "--no-header"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut count = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json");
        assert!(v.is_object(), "row is an object");
        assert!(v.get("n").is_some() && v.get("bound").is_some());
        count += 1;
    }
    assert_eq!(count, 11);
}

#[test]
fn bounds_extended_prints_fifty_digit_volumes() {
    let out = run(&[
        "bounds",
        "--n",
        "2",
        "--n-max",
        "2",
        "--precision",
        "extended",
        "--format",
        "csv",
        "--no-header",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("vol_half_ext50"));
    // Leading digits of the exact n = 2 volume bounds in both conventions.
    assert!(text.contains("5.9084571366905996095"), "half-radius digits");
    assert!(text.contains("9.4535330542641462589"), "full-radius digits");
}

#[test]
fn bounds_rejects_invalid_ranges_with_usage_exit() {
    assert_eq!(run(&["bounds", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--n-max", "13"]).status.code(), Some(2));
    assert_eq!(
        run(&["bounds", "--n", "5", "--n-max", "3"]).status.code(),
        Some(2)
    );
    // Unknown flags are clap usage errors, also exit 2.
    assert_eq!(run(&["bounds", "--bogus"]).status.code(), Some(2));
}

#[test]
fn bounds_header_is_present_by_default_and_suppressible() {
    let with = stdout(&run(&["bounds", "--n-max", "3"]));
    assert!(with.starts_with("# chball bounds ts="));
    assert!(with.contains("# options:"));
    let without = stdout(&run(&["bounds", "--n-max", "3", "--no-header"]));
    assert!(!without.contains('#'));
}

#[test]
fn bounds_csv_is_byte_identical_across_runs() {
    let a = run(&[
        "bounds",
        "--format",
        "csv",
        "--no-header",
        "--precision",
        "extended",
    ]);
    let b = run(&[
        "bounds",
        "--format",
        "csv",
        "--no-header",
        "--precision",
        "extended",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_all_suites_pass_at_full_scale() {
    let out = run(&[
        "verify",
        "--samples",
        "1000",
        "--seed",
        "2026",
        "--format",
        "csv",
        "--no-header",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "suite,check,cases,failures,worst_margin,worst_seed"
    );
    assert!(lines.len() > 30, "all six suites report their checks");
    for line in &lines[1..] {
        let failures = line.split(',').nth(3).expect("failures column");
        assert_eq!(failures, "0", "no failing case in {line}");
    }
}

#[test]
fn verify_single_suite_runs_and_is_deterministic() {
    let a = run(&[
        "verify",
        "--suite",
        "approx",
        "--samples",
        "300",
        "--seed",
        "7",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    let b = run(&[
        "verify",
        "--suite",
        "approx",
        "--samples",
        "300",
        "--seed",
        "7",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json");
        assert_eq!(v["suite"], "approx");
        assert_eq!(v["failures"], 0);
    }
}

#[test]
fn verify_rejects_unknown_suite_with_usage_exit() {
    assert_eq!(run(&["verify", "--suite", "nosuch"]).status.code(), Some(2));
}

// ---------------------------------------------------------------------------
// approx
// ---------------------------------------------------------------------------

#[test]
fn approx_angle_mode_emits_a_valid_certificate() {
    let out = run(&[
        "approx",
        "--thetas",
        "0.2965,0.1358",
        "--Q",
        "17",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("json row");
    assert_eq!(v["kind"], "angles");
    assert_eq!(v["m"], 2);
    assert_eq!(v["certified"], true);
    let q = v["q"].as_u64().expect("q");
    assert!((1..=289).contains(&q), "q = {q} within Q^m");
    let max_err = v["max_err"].as_f64().expect("max_err");
    assert!(max_err <= 1.0 / (q as f64 * 17.0) + 1e-15);
}

#[test]
fn approx_unitary_mode_is_certified_and_seeded() {
    let out = run(&[
        "approx",
        "--n",
        "2",
        "--seed",
        "7",
        "--Q",
        "17",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("json row");
    assert_eq!(v["kind"], "unitary");
    assert_eq!(v["certified"], true);
    let rerun = run(&[
        "approx",
        "--n",
        "2",
        "--seed",
        "7",
        "--Q",
        "17",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    assert_eq!(out.stdout, rerun.stdout);
}

#[test]
fn approx_rejects_bad_inputs_with_usage_exit() {
    assert_eq!(
        run(&["approx", "--thetas", "0.1,oops"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["approx", "--Q", "0.5"]).status.code(), Some(2));
}

// ---------------------------------------------------------------------------
// classify / distance
// ---------------------------------------------------------------------------

#[test]
fn classify_reports_loxodromic_boost_with_closed_forms() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_matrix(&dir, "boost.json", BOOST_2_E1);
    let out = run(&["classify", &path, "--format", "json-lines", "--no-header"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("json row");
    assert_eq!(v["class"], "Loxodromic");
    let norm = v["norm"].as_f64().expect("norm");
    assert!((norm - 2.0).abs() < 1e-12, "|A| = 2, got {norm}");
    let rho = v["rho_origin"].as_f64().expect("rho");
    assert!(
        (rho - 2.0 * 2.0f64.ln()).abs() < 1e-12,
        "rho = 2 ln 2, got {rho}"
    );
    let jq = v["jorgensen"].as_f64().expect("jorgensen");
    assert!((jq - 2.0).abs() < 1e-12, "|A| |A - Id| = 2, got {jq}");
    let moduli = v["moduli"].as_str().expect("moduli");
    assert!(moduli.starts_with("2.000000000e0;1.000000000e0;5.000000000e-1"));
}

#[test]
fn classify_reports_identity() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_matrix(&dir, "id.json", IDENTITY_2);
    let out = run(&["classify", &path, "--format", "json-lines", "--no-header"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("json row");
    assert_eq!(v["class"], "Identity");
    assert_eq!(v["norm"].as_f64().expect("norm"), 1.0);
    assert_eq!(v["jorgensen"].as_f64().expect("jorgensen"), 0.0);
    assert_eq!(v["rho_origin"].as_f64().expect("rho"), 0.0);
    assert_eq!(v["dist_actual"].as_f64().expect("dist"), 0.0);
}

#[test]
fn classify_exits_two_on_corrupted_file_and_one_on_invalid_matrix() {
    let dir = tempfile::tempdir().expect("tempdir");
    let bad = write_matrix(&dir, "bad.json", "not a matrix at all");
    assert_eq!(run(&["classify", &bad]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["classify", missing.to_str().expect("utf-8")])
            .status
            .code(),
        Some(2)
    );

    let scaled = write_matrix(&dir, "scaled.json", SCALED_IDENTITY_2);
    let out = run(&["classify", &scaled]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("residual"), "residuals reported: {err}");
}

#[test]
fn distance_certificate_matches_boost_closed_forms() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_matrix(&dir, "boost.json", BOOST_2_E1);
    let out = run(&["distance", &path, "--format", "json-lines", "--no-header"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("json row");
    // r = exp(rho/2) = 2, distance bound r(r-1) = 2, achieved |A - W| = 1.
    assert_eq!(v["r"].as_f64().expect("r"), 2.0);
    assert_eq!(v["dist_bound"].as_f64().expect("bound"), 2.0);
    assert!((v["dist_actual"].as_f64().expect("actual") - 1.0).abs() < 1e-12);
    assert!(v["witness_form_residual"].as_f64().expect("witness") < 1e-10);
}

#[test]
fn distance_reads_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chball"))
        .args(["distance", "-", "--no-header", "--format", "csv"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .take()
        .expect("stdin")
        .write_all(BOOST_2_E1.as_bytes())
        .expect("write stdin");
    let out = child.wait_with_output().expect("wait");
    assert!(out.status.success());
    assert!(stdout(&out).contains("2.000000000e0"));
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

#[test]
fn optimize_dominates_the_reference_and_is_deterministic() {
    let args = [
        "optimize",
        "--n",
        "2",
        "--format",
        "json-lines",
        "--no-header",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("json row"))
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["which"], "optimized");
    assert_eq!(rows[1]["which"], "reference");
    let opt_delta = rows[0]["delta"].as_f64().expect("delta");
    let ref_delta = rows[1]["delta"].as_f64().expect("delta");
    assert!(
        opt_delta >= ref_delta,
        "optimizer dominates: {opt_delta} vs {ref_delta}"
    );
    assert_eq!(rows[0]["feasible"], true);
    // Tolerance is echoed in every row.
    assert!(rows[0]["tol"].as_f64().expect("tol") > 0.0);

    let rerun = run(&args);
    assert_eq!(out.stdout, rerun.stdout);
}

#[test]
fn optimize_respects_the_threshold_convention() {
    // With the 1/(2 sqrt 2) threshold the bound must come in under ~0.35355
    // instead of ~0.38546, so the optimal displacement shrinks.
    let fh = run(&[
        "optimize",
        "--n",
        "2",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    let martin = run(&[
        "optimize",
        "--n",
        "2",
        "--omega",
        "martin-sqrt",
        "--format",
        "json-lines",
        "--no-header",
    ]);
    assert!(fh.status.success() && martin.status.success());
    let first = |o: &Output| -> serde_json::Value {
        serde_json::from_str(stdout(o).lines().next().expect("row")).expect("json")
    };
    let d_fh = first(&fh)["delta"].as_f64().expect("delta");
    let d_martin = first(&martin)["delta"].as_f64().expect("delta");
    assert!(
        d_martin < d_fh,
        "smaller threshold, smaller budget: {d_martin} vs {d_fh}"
    );
}

#[test]
fn optimize_exits_one_when_no_quality_is_feasible() {
    // 2 pi / Q exceeds the threshold for every Q <= 16, so the range [2, 10]
    // has no feasible quality at all.
    let out = run(&["optimize", "--n", "2", "--Q-min", "2", "--Q-max", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no feasible"));
}

#[test]
fn optimize_rejects_invalid_ranges_with_usage_exit() {
    assert_eq!(run(&["optimize", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--Q-min", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--tol", "-1"]).status.code(), Some(2));
}
