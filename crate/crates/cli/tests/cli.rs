//! Runs the `coxfill` binary on small diagram files.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_coxfill")).args(args).output().expect("binary runs");
    let json: Value = serde_json::from_slice(&stdout).expect("stdout is JSON");
    (status.code().expect("exit code"), json, String::from_utf8_lossy(&stderr).into_owned())
}

#[test]
fn classify_reports_kind_and_catalog_name() {
    let (code, j, err) = run(&["classify", &data("w1.cox"), "--m", "7"]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["kind"], "Large");
    assert_eq!(j["findings"]["irreducible"], true);
    assert!(err.contains("Large (irreducible)"));
    let (code, j, _) = run(&["classify", &data("a2.cox")]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["kind"], "Affine");
    assert_eq!(j["findings"]["catalog_name"], "tilde_A_2");
}

#[test]
fn parse_and_io_errors_exit_with_2() {
    for file in ["empty.cox", "bad.cox", "missing.cox"] {
        let (code, j, _) = run(&["classify", &data(file)]);
        assert_eq!(code, 2, "{file}");
        assert_eq!(j["error"]["code"], 2);
    }
    let (code, _, _) = run(&["classify", &data("w1.cox")]);
    assert_eq!(code, 2, "a symbolic label without --m is a usage error");
}

#[test]
fn unsupported_family_exits_with_3() {
    let (code, j, _) = run(&["deform", &data("lanner.cox")]);
    assert_eq!(code, 3);
    assert!(j["error"]["message"].as_str().unwrap().contains("unsupported family"));
}

#[test]
fn deform_sweeps_the_label() {
    let (code, j, _) = run(&["deform", &data("w1.cox"), "--m", "3..9"]);
    assert_eq!(code, 0);
    let kinds: Vec<&str> = j["findings"].as_array().unwrap().iter().map(|x| x["space"]["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["Empty", "Empty", "Empty", "Empty", "FinitePoints", "FinitePoints", "FinitePoints"]);
    for x in &j["findings"].as_array().unwrap()[4..] {
        assert_eq!(x["space"]["witnesses"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn deform_circle_and_fixed_mu() {
    let (code, j, _) = run(&["deform", &data("u.cox")]);
    assert_eq!(code, 0);
    let space = &j["findings"][0]["space"];
    assert_eq!(space["kind"], "Circle");
    let b = space["reduced"]["normal_form"][2].as_f64().unwrap();
    assert!((b - 8.0 * (std::f64::consts::PI / 5.0).cos().powi(2)).abs() < 1e-12);

    let (code, j, _) = run(&["deform", &data("w3.cox"), "--m", "7", "--mu", "2"]);
    assert_eq!(code, 0);
    let lambdas = j["findings"][0]["space"]["at_mu"]["lambdas"].as_array().unwrap();
    assert_eq!(lambdas.len(), 2);
}

#[test]
fn limit_of_first_family() {
    let (code, j, _) = run(&["limit", &data("w1.cox")]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["realized_vertices"], 7);
    assert_eq!(j["findings"]["hyperbolic"], true);
    assert!(j["findings"]["max_entry_diff"].as_f64().unwrap() < 1e-7);
}

#[test]
fn realize_and_round_trip_through_json() {
    let (code, j, _) = run(&["realize", &data("w2.cox"), "--m", "7"]);
    assert_eq!(code, 0);
    let g = &j["findings"]["geometry"];
    assert_eq!((g["elliptic"].as_u64(), g["loxodromic"].as_u64()), (Some(7), Some(2)));
    let dump = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("p2_7.json");
    std::fs::write(&dump, j["findings"]["realization"].to_string()).unwrap();
    let (code, k, _) = run(&["realize", dump.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(k["findings"]["realization"]["f_vector"], j["findings"]["realization"]["f_vector"]);
}

#[test]
fn orbit_writes_a_mesh_for_three_dimensional_polytopes() {
    // Compact hyperbolic tetrahedron with labels 5, 3, 5.
    let c5 = 2.0 * (std::f64::consts::PI / 5.0).cos();
    let e = serde_json::json!({
        "system": "nodes 1..4; 1-2:5; 2-3; 3-4:5",
        "entries": [[2.0, -c5, 0.0, 0.0], [-c5, 2.0, -1.0, 0.0], [0.0, -1.0, 2.0, -c5], [0.0, 0.0, -c5, 2.0]],
    });
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let input = dir.join("lanner4.json");
    let mesh = dir.join("lanner4.ply");
    std::fs::write(&input, e.to_string()).unwrap();
    let (code, j, _) =
        run(&["orbit", input.to_str().unwrap(), "--max-word-length", "3", "--out", mesh.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["violations"], 0);
    let ply = std::fs::read_to_string(&mesh).unwrap();
    assert!(ply.starts_with("ply"));
}

#[test]
fn relhyp_verdicts() {
    let (code, j, _) = run(&["relhyp", &data("w1.cox"), "--m", "7", "--peripherals", "1,2,3"]);
    assert_eq!(code, 1);
    let c4 = &j["findings"]["verdict"]["conditions"][3];
    assert_eq!(c4["holds"], false);
    assert!(c4["witnesses"].is_array());
    let (code, j, _) = run(&["relhyp", &data("w1.cox"), "--m", "7"]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["peripherals"][0].as_array().unwrap().len(), 5);
}

#[test]
fn truncate_lanner_vertices() {
    let (code, j, _) =
        run(&["truncate", &data("w2.cox"), "--m", "7", "--vertex", "1,3,4,5", "--vertex", "2,3,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(j["findings"]["geometry"]["perfect"], true);
    assert_eq!(j["findings"]["realization"]["f_vector"], serde_json::json!([15, 30, 23, 8, 1]));
}

#[test]
fn reproduce_ids() {
    for id in ["appendixB", "circle", "mix"] {
        let (code, j, _) = run(&["reproduce", id, "--json"]);
        assert_eq!(code, 0, "{id}: {}", j["checks"]);
        assert_eq!(j["checks"]["failed"], 0);
    }
    let (code, _, _) = run(&["reproduce", "nope"]);
    assert_eq!(code, 4);
}

#[test]
fn reports_are_reproducible() {
    let args = ["orbit", &data("w1.cox"), "--m", "7", "--max-word-length", "3", "--seed", "5", "--samples", "500"];
    let a = Command::new(env!("CARGO_BIN_EXE_coxfill")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_coxfill")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_flag_silences_the_summary() {
    let (_, _, err) = run(&["classify", &data("a2.cox"), "--json"]);
    assert!(err.is_empty());
}
