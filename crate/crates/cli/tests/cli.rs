use std::path::Path;
use std::process::{Command, Output};

use crstokes_cli::report::Report;
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crstokes")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn lemmas_report_ten_one_dimensional_kernels() {
    let out = run(&["lemmas", "--patches", "10", "--seed", "7", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "crstokes-report/1");
    assert_eq!(r["seed"], 7);
    let records = r["records"].as_array().unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|x| x["dim_ker_A"] == 1));
    assert_eq!(r["command"][1], "lemmas");
}

#[test]
fn equilateral_hexagon_has_rank_23() {
    let out = run(&["patch", "--m", "6", "--geometry", "equilateral", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &json(&out)["records"][0];
    assert_eq!(rec["rank_M"], 23);
    assert_eq!(rec["M"].as_array().unwrap().len(), 30);
    assert_eq!(rec["ker_B"].as_array().unwrap().len(), 8);
}

#[test]
fn missing_mesh_file_is_a_usage_error_naming_the_path() {
    let out = run(&["infsup", "--mesh", "missing.json", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    assert!(out.stdout.is_empty());
}

#[test]
fn report_goes_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["--out", path.to_str().unwrap(), "rightinv", "--p", "4", "--mode", "edge", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["records"].as_array().unwrap().len(), 3);
}

#[test]
fn mesh_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("m.json");
    let csv = dir.path().join("s.csv");
    let m = mesh.to_str().unwrap();
    assert_eq!(run(&["mesh", "--seed-mesh", "crisscross", "--refine", "1", "--write", m]).status.code(), Some(0));
    let out = run(&["infsup", "--mesh", m, "--p", "3", "--minimal", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("level,nT,hmax,min_angle,dof_v,dof_p,beta,residual"));
    assert_eq!(table.lines().count(), 3);
    let rows = json(&out)["records"].as_array().unwrap().clone();
    assert_eq!(rows[0]["n_triangles"], 16);
    assert!(rows[0]["beta"].as_f64().unwrap() >= rows[1]["beta"].as_f64().unwrap());
}

/// Invocations with a known verdict: (arguments, expected exit code).
fn fixtures(dir: &Path) -> Vec<(Vec<String>, i32)> {
    let single = dir.join("single.json");
    std::fs::write(&single, r#"{"vertices": [[0,0],[1,0],[0,1]], "triangles": [[0,1,2]]}"#).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (s(&["lemmas", "--patches", "3", "--p", "3"]), 0),
        (s(&["lemmas", "--patches", "3", "--p", "3", "--rtol", "1e-30"]), 1),
        (s(&["lemmas", "--p", "4"]), 2),
        (s(&["lemmas", "--p", "3", "--min-angle", "70"]), 2),
        (s(&["patch", "--geometry", "crisscross"]), 0),
        (s(&["patch", "--geometry", "crisscross", "--m", "5"]), 2),
        (s(&["patch", "--geometry", "random", "--m", "9", "--seed", "4"]), 0),
        (s(&["rightinv", "--p", "5", "--mode", "bubble", "--trials", "2"]), 0),
        (s(&["rightinv", "--p", "3", "--mode", "patch", "--trials", "2"]), 0),
        (s(&["rightinv", "--p", "3", "--mode", "edge"]), 2),
        (s(&["rightinv", "--p", "2", "--mode", "sideways"]), 2),
        (s(&["infsup", "--seed-mesh", "disk", "--p", "1"]), 0),
        (s(&["infsup", "--seed-mesh", "crisscross", "--p", "1", "--levels", "3"]), 1),
        (s(&["infsup", "--seed-mesh", "nowhere", "--p", "1"]), 2),
        (s(&["infsup", "--seed-mesh", "lshape", "--p", "2", "--minimal"]), 2),
        (vec!["infsup".into(), "--mesh".into(), broken.display().to_string(), "--p".into(), "1".into()], 2),
        (vec!["mesh".into(), "--mesh".into(), single.display().to_string()], 1),
        (s(&["mesh", "--seed-mesh", "lshape"]), 0),
        (s(&["mesh"]), 2),
        (s(&[]), 2),
    ]
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    for (args, code) in fixtures(dir.path()) {
        let out = Command::new(env!("CARGO_BIN_EXE_crstokes")).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if code != 2 {
            let r = json(&out);
            let all = r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true);
            assert_eq!(r["pass"], all);
            assert_eq!(code == 0, all, "{args:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_reserialize_identically(seed in 0u64..1000, patches in 1usize..4) {
        let out = run(&["lemmas", "--patches", &patches.to_string(), "--seed", &seed.to_string(), "--p", "3"]);
        let text = String::from_utf8(out.stdout).unwrap();
        let first: Report = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&first).unwrap();
        prop_assert_eq!(text.trim_end(), again.as_str());
        let second: Report = serde_json::from_str(&again).unwrap();
        prop_assert_eq!(first, second);
    }
}
