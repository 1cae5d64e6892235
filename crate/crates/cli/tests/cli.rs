//! End-to-end tests of the binary: exit-code contract, report shapes,
//! byte-for-byte determinism, and the catalog override.

use std::io::Write;
use std::process::{Command, Output};

fn lieg2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieg2"))
        .args(args)
        .env_remove("LIEG2_CATALOG_PATH")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

#[test]
fn betti_of_the_solvable_fixture() {
    let out = lieg2(&["betti", "--catalog-id", "s-example", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["betti"], serde_json::json!([1, 1, 0, 0, 0, 0, 1, 1]));
    assert_eq!(v["tool"], "lieg2");
    assert_eq!(v["command"], "betti");
    assert!(v["timing"].is_null());
}

#[test]
fn sweep_reports_the_full_catalog() {
    let out = lieg2(&["sweep", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["total"], 34);
    assert_eq!(v["results"]["admitting"], serde_json::json!([32, 33, 34]));
    assert_eq!(v["results"]["records"].as_array().unwrap().len(), 34);
    assert_eq!(v["results"]["excluded_by_degree"]["degree 1"], 25);
    assert_eq!(v["results"]["excluded_by_degree"]["degree 2"], 2);
    assert_eq!(v["results"]["excluded_by_degree"]["degree 3"], 4);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for format in ["json", "text"] {
        let first = lieg2(&["classify", "--catalog-id", "n1", "--format", format]);
        let second = lieg2(&["classify", "--catalog-id", "n1", "--format", format]);
        assert_eq!(first.stdout, second.stdout, "{format} output must not vary");
        assert_eq!(code(&first), 0);
    }
}

#[test]
fn obstruct_certificate_names_the_expected_witness() {
    let out = lieg2(&[
        "g2-obstruct",
        "--nilradical",
        "n2",
        "--constraints",
        "su",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["verdict"], "certificate");
    let witnesses = v["results"]["witnesses"].as_array().unwrap();
    let e6 = witnesses
        .iter()
        .find(|w| w["vector"] == "e6")
        .expect("e6 appears among the certifying vectors");
    let poly = e6["polynomial"].as_str().unwrap();
    assert!(poly.contains("c56"), "unexpected polynomial {poly}");
    assert_eq!(e6["identically_zero"], false);
}

#[test]
fn refuted_obstructions_exit_with_the_verdict_code() {
    let out = lieg2(&[
        "g2-obstruct",
        "--nilradical",
        "n2",
        "--constraints",
        "none",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["verdict"], "refuted");
    assert_eq!(v["results"]["remainders"].as_array().unwrap().len(), 7);
}

#[test]
fn verdict_failures_and_usage_errors_use_distinct_codes() {
    // Computed negative verdicts: exit 2.
    assert_eq!(code(&lieg2(&["unimodular", "--catalog-id", "s-example"])), 2);
    assert_eq!(code(&lieg2(&["classify", "--catalog-id", "worked"])), 2);
    // Setup failures: exit 1.
    assert_eq!(code(&lieg2(&["betti", "--tuple", "(0,0,zzz)"])), 1);
    assert_eq!(code(&lieg2(&["betti"])), 1);
    assert_eq!(code(&lieg2(&["betti", "--catalog-id", "99"])), 1);
    assert_eq!(code(&lieg2(&["nonsense"])), 1);
    assert_eq!(
        code(&lieg2(&["cohomology", "--catalog-id", "n1", "--degree", "9"])),
        1
    );
    // Successful checks: exit 0.
    assert_eq!(code(&lieg2(&["unimodular", "--catalog-id", "n1"])), 0);
    assert_eq!(code(&lieg2(&["--help"])), 0);
}

#[test]
fn reproduce_filters_by_tag_and_rejects_unknown_filters() {
    let out = lieg2(&["reproduce", "--only", "betti-s", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["total"], 1);
    assert_eq!(v["results"]["all_pass"], true);
    assert_eq!(v["results"]["criteria"][0]["tag"], "betti-s");

    let bad = lieg2(&["reproduce", "--only", "bogus"]);
    assert_eq!(code(&bad), 1);
    let message = String::from_utf8_lossy(&bad.stderr);
    assert!(message.contains("valid tags"), "{message}");
}

#[test]
fn g2_check_confirms_the_adapted_form() {
    let out = lieg2(&[
        "g2-check",
        "--catalog-id",
        "s-example",
        "--phi",
        "e127+e347+e567+e135-e146-e236-e245",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["closed"], true);
    assert_eq!(v["results"]["is_g2"], true);
    assert_eq!(v["results"]["sign"], 1);
    assert_eq!(v["results"]["bilinear_det"], "279936");
    assert_eq!(v["results"]["metric_volume"]["exact"], true);

    // A degenerate form is a computed negative: exit 2 with a witness.
    let bad = lieg2(&[
        "g2-check",
        "--catalog-id",
        "s-example",
        "--phi",
        "e123",
        "--format",
        "json",
    ]);
    assert_eq!(code(&bad), 2);
    let v = stdout_json(&bad);
    assert_eq!(v["results"]["is_g2"], false);
    assert!(v["results"]["witness"].is_array());
}

#[test]
fn the_environment_variable_overrides_the_catalog() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "1 (0,0,0,0,0,e12) # almost abelian test entry").unwrap();
    let path = file.path().as_os_str();

    let out = Command::new(env!("CARGO_BIN_EXE_lieg2"))
        .args(["sweep", "--format", "json"])
        .env("LIEG2_CATALOG_PATH", path)
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["total"], 1);

    // Aliases point at fixed ids and fail cleanly on short catalogs.
    let missing = Command::new(env!("CARGO_BIN_EXE_lieg2"))
        .args(["betti", "--catalog-id", "n2"])
        .env("LIEG2_CATALOG_PATH", path)
        .output()
        .expect("binary runs");
    assert_eq!(code(&missing), 1);
}
