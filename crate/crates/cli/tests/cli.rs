//! End-to-end checks of the `had` binary: exit codes, report validity, and
//! input handling.

mod common;

use common::{run_had, shipped_schema, tmp_path, validate};
use serde_json::Value;

fn report_for(args: &[&str], tag: &str) -> (std::process::Output, Value) {
    let path = tmp_path(tag);
    let mut full: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    full.push("--json");
    full.push(&path_str);
    let out = run_had(&full);
    let text = std::fs::read_to_string(&path).expect("report written");
    std::fs::remove_file(&path).ok();
    (out, serde_json::from_str(&text).expect("report parses"))
}

#[test]
fn counts_command_prints_the_inequality() {
    let out = run_had(&["counts", "--d", "4"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("dim U_4 = 28 < 34 = dim |O(4)|"), "{stdout}");
}

#[test]
fn counts_rejects_small_degrees_with_usage_error() {
    let out = run_had(&["counts", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dim_of_untwisted_square_exits_one() {
    let out = run_had(&[
        "dim",
        "catalogue:twisted_cubic",
        "catalogue:twisted_cubic",
        "--trials",
        "8",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("DEFECT(1)"), "{stdout}");
}

#[test]
fn binomial_conic_reports_the_witness() {
    let out = run_had(&["binomial", "catalogue:conic", "--max-degree", "2"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Found x0*x2 - 1*x1^2"), "{stdout}");
}

#[test]
fn binomial_expect_flag_drives_exit_code() {
    let ok = run_had(&["binomial", "catalogue:conic", "--expect", "found"]);
    assert!(ok.status.success());
    let bad = run_had(&["binomial", "catalogue:conic", "--expect", "none"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn unknown_catalogue_entry_is_an_input_error() {
    let out = run_had(&["sample", "catalogue:unknown_thing"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("unknown_thing"), "{stderr}");
}

#[test]
fn composite_oracle_prime_is_rejected() {
    let out = run_had(&["oracle", "catalogue:conic", "--q", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn variety_files_load_from_disk() {
    let path = tmp_path("variety.vty");
    std::fs::write(&path, "name my_conic\nn 2\nkind param\nparams s t\npoly s^2\npoly s*t\npoly t^2\n")
        .unwrap();
    let out = run_had(&["sample", path.to_str().unwrap(), "--seed", "5"]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("my_conic"), "{stdout}");
}

#[test]
fn malformed_variety_files_are_input_errors() {
    let path = tmp_path("broken.vty");
    std::fs::write(&path, "name broken\nn 2\nkind param\nparams s t\npoly s^2\n").unwrap();
    let out = run_had(&["sample", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_command_emits_a_schema_valid_report() {
    let schema = shipped_schema();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("dim", vec!["dim", "catalogue:twisted_cubic", "catalogue:twisted_cubic", "--trials", "2"]),
        ("multi", vec!["multi", "catalogue:skew_line_01", "catalogue:skew_line_23", "--trials", "2"]),
        ("twist", vec!["twist", "catalogue:skew_line_01", "catalogue:skew_line_23", "--trials", "3"]),
        ("power", vec!["power", "catalogue:conic", "--k", "2", "--trials", "2"]),
        ("binomial", vec!["binomial", "catalogue:conic", "--max-degree", "2"]),
        ("counts", vec!["counts", "--d", "4", "--to", "6"]),
        ("sample", vec!["sample", "catalogue:fermat_cubic"]),
        ("oracle", vec!["oracle", "catalogue:twisted_cubic"]),
        ("catalogue", vec!["catalogue"]),
    ];
    for (tag, args) in cases {
        let (_, doc) = report_for(&args, &format!("schema-{tag}"));
        let errors = validate(&schema, &doc);
        assert!(errors.is_empty(), "{tag}: {errors:?}");
        assert_eq!(doc["command"], tag);
    }
}

#[test]
fn threads_flag_does_not_change_the_report() {
    let (_, a) = report_for(
        &["multi", "catalogue:twisted_cubic", "catalogue:twisted_cubic", "--seed", "9"],
        "thr1",
    );
    let (_, b) = report_for(
        &[
            "multi",
            "catalogue:twisted_cubic",
            "catalogue:twisted_cubic",
            "--seed",
            "9",
            "--threads",
            "2",
        ],
        "thr2",
    );
    assert_eq!(a["result"], b["result"]);
}
