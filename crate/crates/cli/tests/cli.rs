//! End-to-end tests of the `bsstar` binary: exit codes, output text, and
//! JSON round trips, all through real process invocations.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bsstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsstar"))
        .args(args)
        .env_remove("BSSTAR_MEMORY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[track_caller]
fn assert_code(out: &Output, expected: i32) {
    assert_eq!(
        out.status.code(),
        Some(expected),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout parses as JSON")
}

#[test]
fn bounds_reports_exact_and_sandwich() {
    let out = bsstar(&["bounds", "5"]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("D(5) = 51 (exact)"));

    let out = bsstar(&["bounds", "6"]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("316 <= D(6) <= 354"));

    let out = bsstar(&["bounds", "7", "--format", "json"]);
    assert_code(&out, 0);
    let v = json_of(&out);
    assert_eq!(v["lower"], 2269);
    assert_eq!(v["upper_constructive"], 2509);
    assert_eq!(v["exact"], Value::Null);
}

#[test]
fn construct_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c4.json");
    let out = bsstar(&["construct", "4", "--out", cert.to_str().unwrap()]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("removed_count  10"));

    let body: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(body["n"], 4);
    assert_eq!(body["removed_count"], 10);
    assert_eq!(body["reserved"].as_array().unwrap().len(), 2);

    let out = bsstar(&["verify", "--cert", cert.to_str().unwrap()]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("VERIFY PASS"));
}

#[test]
fn construct_without_out_streams_the_certificate() {
    let out = bsstar(&["construct", "3"]);
    assert_code(&out, 0);
    let body = json_of(&out);
    assert_eq!(body["n"], 3);
    assert_eq!(body["removed_count"], 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = bsstar(&["verify", "--cert", path.to_str().unwrap(), "--deep"]);
    assert_code(&out, 0);
}

fn construct_to(dir: &Path, n: &str) -> String {
    let cert = dir.join(format!("c{n}.json"));
    let out = bsstar(&["construct", n, "--out", cert.to_str().unwrap()]);
    assert_code(&out, 0);
    cert.to_str().unwrap().to_owned()
}

#[test]
fn deep_verification_is_honest_about_dimension_seven() {
    let dir = tempfile::tempdir().unwrap();

    let c6 = construct_to(dir.path(), "6");
    let out = bsstar(&["verify", "--cert", &c6, "--deep"]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("[PASS] independence"));

    // The dimension-7 certificate decycles the graph (shallow check passes)
    // but its reserved family is not distance-4 independent.
    let c7 = construct_to(dir.path(), "7");
    let out = bsstar(&["verify", "--cert", &c7]);
    assert_code(&out, 0);

    let out = bsstar(&["verify", "--cert", &c7, "--deep"]);
    assert_code(&out, 1);
    let text = stdout(&out);
    assert!(text.contains("[FAIL] independence"));
    assert!(text.contains("VERIFY FAIL"));
}

#[test]
fn duplicated_reserved_vertex_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "4");
    let mut body: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let reserved = body["reserved"].as_array_mut().unwrap();
    let first = reserved[0].clone();
    reserved[1] = first;
    std::fs::write(&path, serde_json::to_string(&body).unwrap()).unwrap();

    let out = bsstar(&["verify", "--cert", &path]);
    assert_code(&out, 1);
    assert!(stdout(&out).contains("[FAIL] reserved-distinct"));
}

#[test]
fn verify_report_serializes() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "5");
    let out = bsstar(&["verify", "--cert", &path, "--deep", "--format", "json"]);
    assert_code(&out, 0);
    let v = json_of(&out);
    assert_eq!(v["n"], 5);
    assert!(v["checks"].as_array().unwrap().len() >= 5);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bounds", "2"][..],
        &["construct", "6", "--base", "123456"][..], // even base
        &["verify", "--cert", "/does/not/exist.json"][..],
        &["distance", "4", "--from", "123", "--to", "1234"][..],
        &["route", "5", "--k", "0"][..],
        &["no-such-command"][..],
        &["export", "7", "dot"][..], // readability guard without --force
    ] {
        let out = bsstar(args);
        assert_code(&out, 2);
    }
}

#[test]
fn resource_errors_exit_three() {
    let out = bsstar(&["exact", "5"]);
    assert_code(&out, 3);
    assert!(stderr(&out).contains("24"));

    let out = Command::new(env!("CARGO_BIN_EXE_bsstar"))
        .args(["diameter", "6"])
        .env("BSSTAR_MEMORY_BUDGET", "1000")
        .output()
        .unwrap();
    assert_code(&out, 3);
    assert!(stderr(&out).contains("implicit"));

    let out = bsstar(&["exact", "4", "--budget", "9"]);
    assert_code(&out, 3);
    assert!(stdout(&out).contains("no solution within budget 9"));
}

#[test]
fn distance_and_diameter_match_known_values() {
    let out = bsstar(&["distance", "5", "--from", "12345", "--to", "45123"]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("= 4"));

    let out = bsstar(&["diameter", "5", "--cross-check", "5"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("diameter  5"));
    assert!(text.contains("5 sampled eccentricities all equal 5"));

    let out = bsstar(&["diameter", "4", "--format", "json"]);
    assert_code(&out, 0);
    assert_eq!(json_of(&out)["diameter"], 4);
}

#[test]
fn route_agrees_on_small_dimensions_and_reports_the_even_n_gap() {
    let out = bsstar(&["route", "5", "--k", "2"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("length   4"));
    assert!(text.contains("matches the distance formula"));

    // The even-n closed form overstates the distance at n=8, k=3; the greedy
    // route (which equals the BFS distance) exposes that.
    let out = bsstar(&["route", "8", "--k", "3"]);
    assert_code(&out, 1);
    let text = stdout(&out);
    assert!(text.contains("length   7"));
    assert!(text.contains("formula  9"));
    assert!(text.contains("MISMATCH"));

    let out = bsstar(&[
        "route", "6", "--k", "3", "--base", "214365", "--format", "json",
    ]);
    assert_code(&out, 0);
    let v = json_of(&out);
    assert_eq!(v["length"], 7);
    assert_eq!(v["agrees"], true);
}

#[test]
fn exact_solves_the_library_graph_and_edge_list_files() {
    let out = bsstar(&["exact", "3"]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("minimum decycling number: 2"));

    let out = bsstar(&["exact", "4", "--format", "json"]);
    assert_code(&out, 0);
    let v = json_of(&out);
    assert_eq!(v["outcome"]["optimal"]["optimum"], 10);
    assert_eq!(
        v["outcome"]["optimal"]["optimal_set"]
            .as_array()
            .unwrap()
            .len(),
        10
    );

    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("bs3.edges");
    let out = bsstar(&["export", "3", "edgelist", "--out", edges.to_str().unwrap()]);
    assert_code(&out, 0);
    let out = bsstar(&["exact", "--edge-list", edges.to_str().unwrap()]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("minimum decycling number: 2"));

    let garbage = dir.path().join("bad.edges");
    std::fs::write(&garbage, "0 1\nnot numbers\n").unwrap();
    let out = bsstar(&["exact", "--edge-list", garbage.to_str().unwrap()]);
    assert_code(&out, 2);
}

#[test]
fn export_dot_labels_and_guards() {
    let out = bsstar(&["export", "3", "dot"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("label=\"123\""));
    assert!(text.contains("label=\"213\""));
    assert!(text.contains("parity=\"odd\""));

    let out = bsstar(&["export", "7", "dot", "--force"]);
    assert_code(&out, 0);
    assert!(stdout(&out).lines().count() > 5040);
}

#[test]
fn independent_check_accepts_members_or_certificates() {
    let out = bsstar(&[
        "independent-check",
        "12345",
        "23451",
        "34512",
        "45123",
        "51234",
    ]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("independent: yes"));

    let dir = tempfile::tempdir().unwrap();
    let c7 = construct_to(dir.path(), "7");
    let out = bsstar(&["independent-check", "--cert", &c7, "--format", "json"]);
    assert_code(&out, 1);
    let v = json_of(&out);
    assert_eq!(v["independent"], false);
    assert_eq!(v["min_distance"], 2);
    assert!(v["witness"]["a"].is_string());
}

#[test]
fn implicit_and_cached_adjacency_agree() {
    for mode in ["--implicit", "--cached"] {
        let out = bsstar(&["diameter", "4", mode]);
        assert_code(&out, 0);
        assert!(stdout(&out).contains("diameter  4"));
    }
    let out = bsstar(&["diameter", "4", "--implicit", "--cached"]);
    assert_code(&out, 2);
}
