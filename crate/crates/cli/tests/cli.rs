use std::process::{Command, Output};

use serde_json::Value;

fn kloost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloost"))
        .args(args)
        .env_remove("KLOOST_FORCE")
        .output()
        .expect("binary runs")
}

fn first_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(text.lines().next().expect("one line")).unwrap()
}

#[test]
fn closed_distribution_for_m6() {
    let out = kloost(&["distribution", "--m", "6", "--mode", "closed", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = first_record(&out);
    let counts = &rec["payload"]["counts"];
    for (r, n) in [(3, 6), (7, 9), (11, 14), (15, 10), (19, 12), (23, 12)] {
        assert_eq!(counts[r.to_string()], n, "residue {r}");
    }
    assert_eq!(rec["payload"]["total"], 63);
}

#[test]
fn distribution_modes_agree() {
    let mut seen = Vec::new();
    for mode in ["fast", "closed", "brute"] {
        let out = kloost(&["distribution", "--m", "8", "--mode", mode]);
        assert_eq!(out.status.code(), Some(0));
        seen.push(first_record(&out)["payload"]["counts"].clone());
    }
    assert_eq!(seen[0], seen[1]);
    assert_eq!(seen[1], seen[2]);
}

#[test]
fn thm9_suite_passes() {
    let out = kloost(&["verify", "--m-min", "4", "--m-max", "12", "--suite", "thm9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn zero_input_is_a_usage_error() {
    let out = kloost(&["ksum", "--m", "6", "--a", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(kloost(&["ksum", "--m", "6", "--a", "1", "--modulus", "41"]).status.code(), Some(2));
    assert_eq!(kloost(&["classify", "--m", "5", "--a", "1"]).status.code(), Some(2));
    assert_eq!(kloost(&["ksum", "--m", "31", "--a", "1"]).status.code(), Some(2));
    assert_eq!(kloost(&["ksum", "--m", "6", "--a", "zz"]).status.code(), Some(2));
    assert_eq!(kloost(&["verify", "--m-min", "4", "--m-max", "6", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    assert_eq!(kloost(&["ksum", "--m", "25", "--a", "1"]).status.code(), Some(3));
    let out = kloost(&["verify", "--m-min", "4", "--m-max", "16", "--suite", "thm9"]);
    assert_eq!(out.status.code(), Some(3));
    // Nothing runs before the cap check.
    assert!(out.stdout.is_empty());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["classify", "--m", "8", "--all", "--format", "csv"][..],
        &["verify", "--m-min", "3", "--m-max", "6"][..],
        &["expsums", "--m", "10", "--format", "table"][..],
    ] {
        let a = kloost(args);
        let b = kloost(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn ksum_record() {
    let rec = first_record(&kloost(&["ksum", "--m", "6", "--a", "1f"]));
    assert_eq!(rec["field"]["modulus"], "43");
    let p = &rec["payload"];
    let k = p["value"].as_i64().unwrap();
    assert_eq!(p["mod8"].as_i64().unwrap(), k.rem_euclid(8));
    assert_eq!(p["predicted_mod8"], p["mod8"]);
    assert_eq!(p["predicted_mod3"], p["mod3"]);
}

#[test]
fn lpoly_checks() {
    let rec = first_record(&kloost(&["lpoly"]));
    let p = &rec["payload"];
    assert_eq!(p["coefficients"], serde_json::json!([1, 2, 4, 4, 8, 8, 16, 16, 16]));
    assert_eq!(p["factorization_ok"], true);
    assert_eq!(p["functional_equation_ok"], true);
    assert_eq!(p["brute_power_sums"], p["predicted_power_sums"]);
}

#[test]
fn solve_eq_count_matches_listing() {
    for a in ["1", "2", "3", "1d", "3f"] {
        let rec = first_record(&kloost(&["solve-eq", "--m", "6", "--k", "3", "--a", a]));
        let p = &rec["payload"];
        assert_eq!(p["count"].as_u64().unwrap(), p["solutions"].as_array().unwrap().len() as u64);
    }
}

#[test]
fn curve_count_csv() {
    let out = kloost(&["curve-count", "--m", "6", "--c", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,c,points,p3,epsilon,kloosterman_prediction"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let points: u64 = row[2].parse().unwrap();
    let p3: u64 = row[3].parse().unwrap();
    assert_eq!(points, 3 * p3);
    assert_eq!(row[5], row[2]);
}

#[test]
fn force_lifts_caps() {
    let out = Command::new(env!("CARGO_BIN_EXE_kloost"))
        .args(["verify", "--m-min", "17", "--m-max", "17", "--suite", "field"])
        .env("KLOOST_FORCE", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let without = kloost(&["verify", "--m-min", "17", "--m-max", "17", "--suite", "field"]);
    assert_eq!(without.status.code(), Some(3));
}
