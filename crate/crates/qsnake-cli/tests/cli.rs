use serde_json::Value;
use std::process::{Command, Output};

fn qsnake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsnake"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Sum of all coefficient values at q = 1, i.e. the number of matchings
/// behind the expansion.
fn coefficient_mass(v: &Value) -> i64 {
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|t| t["coeff"].as_array().unwrap())
        .map(|pair| pair[1].as_i64().unwrap())
        .sum()
}

#[test]
fn expand_kronecker_base_case_has_two_unit_terms() {
    let out = qsnake(&["expand", "kronecker", "--n", "0"]);
    let v = stdout_json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        assert_eq!(t["coeff"], serde_json::json!([[0, 1]]));
    }
    let exps: Vec<&Value> = terms.iter().map(|t| &t["exp"]).collect();
    assert!(exps.contains(&&serde_json::json!([-1, 2, 0, 0])));
}

#[test]
fn matchings_route_counts_five_matchings_at_n1() {
    let out = qsnake(&["expand", "kronecker", "--n", "1", "--route", "matchings"]);
    let v = stdout_json(&out);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    assert_eq!(coefficient_mass(&v), 5);
}

#[test]
fn all_routes_agree_and_report_equal() {
    let out = qsnake(&["expand", "kronecker", "--n", "2", "--all-routes"]);
    let v = stdout_json(&out);
    assert_eq!(v["equal"], Value::Bool(true));
    assert_eq!(v["qbinom"], v["matchings"]);
    assert_eq!(v["qbinom"], v["mutation"]);
}

#[test]
fn typea_expansion_has_unit_coefficients() {
    let out = qsnake(&["expand", "typea", "--orient", "><>", "--interval", "2..4"]);
    let v = stdout_json(&out);
    for t in v["terms"].as_array().unwrap() {
        assert_eq!(t["coeff"], serde_json::json!([[0, 1]]));
    }
}

#[test]
fn bad_arguments_exit_with_code_two() {
    for args in [
        &["expand", "typea", "--orient", ">>", "--interval", "3..1"] as &[&str],
        &["expand", "typea", "--orient", ">>", "--interval", "nope"],
        &["expand", "typea", "--orient", "x>", "--interval", "1..2"],
        &["expand", "kronecker", "--n", "13"],
        &["expand", "kronecker", "--n", "0", "--bogus"],
        &["bps", "--n", "13"],
        &["verify", "--suite", "bogus"],
        &["lattice", "kronecker-g", "--n", "9"],
    ] {
        let out = qsnake(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn lattice_demo_has_eleven_nodes_and_fifteen_edges() {
    let out = qsnake(&["lattice", "demo"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (11, 15));
}

#[test]
fn lattice_g0_has_two_nodes() {
    let out = qsnake(&["lattice", "kronecker-g", "--n", "0"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    assert_eq!(nodes, 2);
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        &["expand", "kronecker", "--n", "3", "--all-routes"] as &[&str],
        &["lattice", "demo"],
        &["table", "--family", "g", "--n", "2"],
        &["stembridge", "--n-max", "3"],
    ] {
        let a = qsnake(args);
        let b = qsnake(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
    }
}

#[test]
fn verify_stembridge_suite_passes() {
    let out = qsnake(&["verify", "--suite", "stembridge", "--n-max", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass stembridge/fixed-points"));
}

#[test]
fn verify_seed_suite_passes() {
    let out = qsnake(&["verify", "--suite", "seed", "--n-max", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("pass ")).count(), 2);
}

#[test]
fn stembridge_csv_starts_with_header_and_base_row() {
    let out = qsnake(&["stembridge", "--n-max", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,r,level_size,x_at_minus_one,fixed_count,pass"));
    assert_eq!(lines.next(), Some("0,0,0,1,1,1,true"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn table_lists_g1_levels_with_quantum_coefficient() {
    let out = qsnake(&["table", "--n", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,r,level_size,twist_polynomial");
    assert_eq!(lines.len(), 5);
    assert!(lines.contains(&"0,1,2,q^(-1/2) + q^(1/2)"));
}

#[test]
fn bps_matches_expand_ground_truth_shape() {
    let out = qsnake(&["bps", "--n", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    assert_eq!(coefficient_mass(&v), 3);
}
