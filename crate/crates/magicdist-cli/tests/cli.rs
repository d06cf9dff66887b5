//! End-to-end tests of the `magicdist` binary: exit codes, report headers,
//! sweep geometry and search determinism, all through the public interface.

use std::path::PathBuf;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_magicdist"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("no signal"),
        String::from_utf8(output.stdout).expect("utf-8 stdout"),
        String::from_utf8(output.stderr).expect("utf-8 stderr"),
    )
}

fn run_json(args: &[&str]) -> (i32, serde_json::Value) {
    let (code, stdout, stderr) = run(args);
    let value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}); stderr: {stderr}"));
    (code, value)
}

/// Data rows of a sweep CSV: everything after the `#` comments and the
/// column header.
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty() && !l.starts_with("theta"))
        .map(|l| l.split(',').map(|v| v.parse().expect("numeric cell")).collect())
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("magicdist-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_data_subset_passes_and_prints_per_check_lines() {
    let (code, stdout, _) = run(&["verify", "--only", "data"]);
    assert_eq!(code, 0, "clean tables must pass:\n{stdout}");
    assert!(stdout.contains("ok   data_digest"), "digest line:\n{stdout}");
    assert!(stdout.contains("ok   data_tables"), "tables line:\n{stdout}");
    assert!(stdout.contains("2 of 2 checks passed"), "summary:\n{stdout}");
}

#[test]
fn verify_names_the_check_that_catches_a_corrupted_sign() {
    let (code, stdout, _) = run(&["verify", "--only", "data_digest", "--corrupt", "faces:0:2"]);
    assert_eq!(code, 1, "a corrupted sign must fail the run");
    assert!(
        stdout.contains("FAIL data_digest"),
        "the digest check must be named:\n{stdout}"
    );
}

#[test]
fn verify_rejects_a_filter_matching_no_check() {
    let (code, _, stderr) = run(&["verify", "--only", "nonexistent"]);
    assert_eq!(code, 2, "an unmatched filter is a usage error");
    assert!(stderr.contains("matches no check"), "{stderr}");
}

#[test]
fn verify_refuses_to_corrupt_a_zero_entry() {
    let (code, _, stderr) = run(&["verify", "--corrupt", "faces:0:1"]);
    assert_eq!(code, 2, "flipping a zero entry changes nothing and is refused");
    assert!(stderr.contains("is zero"), "{stderr}");
}

#[test]
fn enumerate_lists_all_thirty_two_qubit_reductions() {
    let (code, report) = run_json(&["enumerate", "--n", "2", "--kind", "reductions"]);
    assert_eq!(code, 0);
    let r = &report["report"];
    assert_eq!(r["count"], 30, "closed-form reduction count at n = 2");
    assert_eq!(r["items"].as_array().expect("items").len(), 30);
}

#[test]
fn enumerate_reports_closed_form_counts_without_listing() {
    let (code, report) = run_json(&["enumerate", "--n", "5", "--kind", "states", "--count-only"]);
    assert_eq!(code, 0);
    assert_eq!(report["report"]["count"], 2_423_520u64, "five-qubit state count");
    let (code, _, stderr) = run(&["enumerate", "--n", "5", "--kind", "reductions"]);
    assert_eq!(code, 2, "12521520 rows exceed the listing cap: {stderr}");
}

#[test]
fn polytope_splits_inside_and_outside_by_exit_code() {
    let (code, report) = run_json(&["polytope", "--state", "counterexample:1"]);
    assert_eq!(code, 1, "the first embedded state lies outside the hull");
    assert_eq!(report["report"]["inside"], false);
    assert!(
        report["report"]["certificate"]["halfspace"].is_array()
            || report["report"]["certificate"]["halfspace"].is_object(),
        "an outside verdict carries the separating halfspace"
    );

    let (code, report) = run_json(&["polytope", "--state", "diag:1/4"]);
    assert_eq!(code, 0, "a point inside the octahedron is in the hull");
    assert_eq!(report["report"]["inside"], true);
}

#[test]
fn polytope_rejects_a_bloch_vector_outside_the_sphere() {
    let (code, _, stderr) = run(&["polytope", "--state", "diag:9/10"]);
    assert_eq!(code, 2, "(0.9, 0.9, 0.9) is not a density matrix: {stderr}");
}

#[test]
fn counterexamples_reverifies_all_seven_embedded_states() {
    let (code, report) = run_json(&["counterexamples"]);
    assert_eq!(code, 0);
    let r = &report["report"];
    assert_eq!(r["reports"].as_array().expect("reports").len(), 7);
    assert_eq!(r["all_pass"], true);
}

#[test]
fn parity_sweep_boundary_lies_on_the_unit_cross_polytope_edge() {
    let (code, stdout, _) = run(&[
        "sweep", "--plane", "y_eq_0", "--scheme", "parity", "--resolution", "5",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&stdout);
    assert!(rows.len() >= 15, "one row per interior angle, got {}", rows.len());
    for row in &rows {
        let (x, z) = (row[1], row[3]);
        assert!(
            (x + z - 1.0).abs() < 2e-6,
            "the pair-sum boundary in the y = 0 quadrant is x + z = 1, got ({x}, {z})"
        );
    }
}

#[test]
fn twisted_sweep_passes_near_the_scaled_equality_point() {
    let (code, stdout, _) = run(&[
        "sweep", "--plane", "x_eq_y", "--scheme", "twisted",
        "--theta-min", "25", "--theta-max", "26", "--resolution", "0.1",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&stdout);
    assert!(!rows.is_empty(), "the window straddles the reference direction");
    // 0.9895 times the dual-bound equality point, the largest rescaling at
    // which the twisted trajectory is still known to converge.
    let scaled = magicdist::data::dual_bound_equality_point()
        .scale(magicdist::data::EQUALITY_POINT_SCALE);
    let p = [scaled.x, scaled.y, scaled.z];
    let closest = rows
        .iter()
        .map(|row| {
            let d = [row[1] - p[0], row[2] - p[1], row[3] - p[2]];
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(
        closest < 5e-3,
        "the basin boundary passes through the scaled point, distance {closest:.2e}"
    );
}

#[test]
fn zero_width_sweep_window_emits_the_header_only() {
    let (code, stdout, _) = run(&[
        "sweep", "--plane", "x_eq_y", "--scheme", "twisted",
        "--theta-min", "30", "--theta-max", "30",
    ]);
    assert_eq!(code, 0);
    assert!(csv_rows(&stdout).is_empty(), "no data rows:\n{stdout}");
    assert!(
        stdout.lines().any(|l| l == "theta_degrees,x,y,z,boundary_r"),
        "column header still present:\n{stdout}"
    );
}

#[test]
fn sweep_rejects_a_resolution_below_the_floor() {
    let (code, _, stderr) = run(&[
        "sweep", "--plane", "y_eq_0", "--scheme", "parity", "--resolution", "0.00001",
    ]);
    assert_eq!(code, 2, "resolution below 1e-4 is a usage error: {stderr}");
}

#[test]
fn search_result_is_invariant_under_worker_count() {
    let base = ["search", "--copies", "2", "--state", "xz:501/1000", "--objective", "sum_xz"];
    let (code1, one) = run_json(&[&base[..], &["--workers", "1"]].concat());
    let (code2, two) = run_json(&[&base[..], &["--workers", "2"]].concat());
    assert_eq!((code1, code2), (0, 0));
    assert_eq!(
        one["report"]["result"], two["report"]["result"],
        "worker count must not change the canonical-order result"
    );
    let best = one["report"]["result"]["best_value"].as_f64().expect("best_value");
    assert!(
        (best - 1.002).abs() < 1e-12,
        "two copies cannot beat keeping one copy: best x + z = 2 * 0.501, got {best}"
    );
}

#[test]
fn interrupted_search_resumes_to_the_uninterrupted_report() {
    let ckpt = temp_path("resume.checkpoint");
    let _ = std::fs::remove_file(&ckpt);
    let ckpt_str = ckpt.to_str().expect("utf-8 temp path");
    let base = ["search", "--copies", "3", "--state", "xz:501/1000", "--objective", "sum_xz"];

    let (code, partial) = run_json(&[
        &base[..],
        &["--checkpoint", ckpt_str, "--checkpoint-every", "1"],
        &["--block-size", "16", "--max-blocks", "4"],
    ]
    .concat());
    assert_eq!(code, 0);
    assert_eq!(partial["report"]["result"]["completed"], false, "stopped mid-run");

    let (code, resumed) = run_json(&[&base[..], &["--checkpoint", ckpt_str]].concat());
    assert_eq!(code, 0);
    let (code, fresh) = run_json(&base);
    assert_eq!(code, 0);
    assert_eq!(resumed["report"]["result"]["completed"], true);
    assert_eq!(
        resumed["report"]["result"], fresh["report"]["result"],
        "resume must reproduce the uninterrupted report"
    );
    let _ = std::fs::remove_file(&ckpt);
}

#[test]
fn search_refuses_a_corrupt_checkpoint() {
    let ckpt = temp_path("corrupt.checkpoint");
    std::fs::write(&ckpt, "garbage, not a checkpoint").expect("write temp file");
    let (code, _, stderr) = run(&[
        "search", "--copies", "3", "--state", "xz:501/1000", "--objective", "sum_xz",
        "--checkpoint", ckpt.to_str().expect("utf-8 temp path"),
    ]);
    assert_eq!(code, 2, "a corrupt checkpoint must not be resumed");
    assert!(stderr.contains("checkpoint rejected"), "{stderr}");
    let _ = std::fs::remove_file(&ckpt);
}

#[test]
fn search_rejects_more_than_five_total_qubits() {
    let (code, _, stderr) = run(&[
        "search", "--copies", "3", "--state", "counterexample:1", "--objective", "escape_o1",
    ]);
    assert_eq!(code, 2, "3 copies of a two-qubit state exceed the reduction limit");
    assert!(stderr.contains("2..=5"), "{stderr}");
}

#[test]
fn thresholds_match_their_reference_constants() {
    let (code, report) = run_json(&["thresholds"]);
    assert_eq!(code, 0, "all six thresholds within the gate");
    let rows = report["report"]["rows"].as_array().expect("rows");
    assert_eq!(rows.len(), 6, "three noise models times two criteria");
    for row in rows {
        let dev = row["deviation"].as_f64().expect("deviation");
        assert!(dev < 1e-6, "{} / {}: deviation {dev:.2e}", row["noise"], row["criterion"]);
    }
    let ratio = report["report"]["worst_case_note"]["alternate_over_computed"]
        .as_f64()
        .expect("ratio");
    assert!(
        (ratio - std::f64::consts::SQRT_2).abs() < 1e-9,
        "the two worst-case readings differ by exactly sqrt(2), got {ratio}"
    );
}

#[test]
fn fixedpoint_reports_the_map_constants() {
    let (code, report) = run_json(&["fixedpoint"]);
    assert_eq!(code, 0);
    let r = &report["report"];
    let five = r["five_qubit_symmetric"]["fixed_point"].as_f64().expect("fixed point");
    assert!(
        (five - (3.0f64 / 7.0).sqrt()).abs() < 1e-9,
        "symmetric five-qubit fidelity fixed point sits at sqrt(3/7), got {five}"
    );
    assert_eq!(r["dual_round_gain"]["lower"], 0.5, "gain interval opens exactly at 1/2");
    let rep = r["twisted_diagonal"]["repelling"].as_f64().expect("repelling");
    let att = r["twisted_diagonal"]["attracting"].as_f64().expect("attracting");
    assert!(
        (rep - 1.0 / 7.0f64.sqrt()).abs() < 1e-9,
        "diagonal repeller at 1/sqrt(7), got {rep}"
    );
    assert!(
        (att - 1.0 / 3.0f64.sqrt()).abs() < 1e-9,
        "diagonal attractor at 1/sqrt(3), got {att}"
    );
}

#[test]
fn every_report_embeds_tool_version_digest_and_config() {
    let (_, report) = run_json(&["thresholds"]);
    assert_eq!(report["tool"]["name"], "magicdist");
    assert_eq!(report["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(
        report["data_digest"].as_str().expect("digest"),
        magicdist::data::FROZEN_DATA_DIGEST,
        "reports pin the embedded-tables checksum"
    );
    assert_eq!(report["config"]["subcommand"], "thresholds");
    assert_eq!(report["config"]["workers"], 0);
}

#[test]
fn reports_can_be_written_to_a_file_instead_of_stdout() {
    let out = temp_path("report.json");
    let (code, stdout, _) = run(&["fixedpoint", "--out", out.to_str().expect("utf-8")]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "the report goes to the file, not stdout");
    let text = std::fs::read_to_string(&out).expect("report file written");
    let report: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(report["config"]["subcommand"], "fixedpoint");
    let _ = std::fs::remove_file(&out);
}
