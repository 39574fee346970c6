//! End-to-end tests of the command-line surface and its exit-code contract.

use hillrep_cli::formats::{HillFile, MapFile, to_json_string};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hillrep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_fixture_map(dir: &Path) -> String {
    // the real 2x2 -> 3x3 map with symmetric outputs that is not *-linear
    let map = hillrep::samples::symmetric_output_map();
    let file = MapFile::from_map(&map, "matricization", "real");
    let path = dir.join("symmetric_output.json");
    std::fs::write(&path, to_json_string(&file)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn random_analyze_reports_rank_and_star_linearity() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let map = map.to_str().unwrap();
    let out = run(&["random", "--n", "3", "--q", "2", "--rank", "4", "--seed", "11", "--out", map]);
    assert!(out.status.success());

    let out = run(&["analyze", map]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["star_linear"], Value::Bool(true));
    assert_eq!(json["hermitian_choi"], Value::Bool(true));
    assert_eq!(json["shuffle_identity"], Value::Bool(true));
    assert_eq!(json["m"], Value::from(4));
    assert_eq!(json["choi_eigenvalues"].as_array().unwrap().len(), 6);
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn hill_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let rep = dir.path().join("rep.json");
    let (map, rep) = (map.to_str().unwrap(), rep.to_str().unwrap());
    assert!(run(&["random", "--n", "2", "--q", "3", "--rank", "5", "--seed", "3", "--out", map])
        .status
        .success());
    assert!(run(&["hill", map, "--strategy", "blocks", "--out", rep]).status.success());
    let out = run(&["verify", map, rep]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["pass"], Value::Bool(true));
    assert!(json["residuals"]["reconstruction_rel"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn verify_rejects_tampered_representation() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let rep = dir.path().join("rep.json");
    let (map, rep) = (map.to_str().unwrap(), rep.to_str().unwrap());
    run(&["random", "--n", "2", "--q", "2", "--rank", "3", "--seed", "9", "--out", map]);
    run(&["hill", map, "--out", rep]);

    // zero out the first A matrix
    let mut file: HillFile = serde_json::from_str(&std::fs::read_to_string(rep).unwrap()).unwrap();
    for row in &mut file.a[0] {
        for e in row.iter_mut() {
            *e = [0.0, 0.0];
        }
    }
    std::fs::write(rep, to_json_string(&file)).unwrap();

    let out = run(&["verify", map, rep]);
    assert_eq!(out.status.code(), Some(4));
    let json = stdout_json(&out);
    assert_eq!(json["pass"], Value::Bool(false));
    assert!(json["residuals"]["reconstruction_rel"].as_f64().unwrap() > 1e-10);
}

#[test]
fn verify_rejects_representation_of_other_map() {
    let dir = tempfile::tempdir().unwrap();
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let rep = dir.path().join("rep.json");
    let (m1, m2, rep) = (m1.to_str().unwrap(), m2.to_str().unwrap(), rep.to_str().unwrap());
    run(&["random", "--n", "2", "--q", "2", "--rank", "3", "--seed", "21", "--out", m1]);
    run(&["random", "--n", "2", "--q", "2", "--rank", "3", "--seed", "22", "--out", m2]);
    run(&["hill", m2, "--out", rep]);
    assert_eq!(run(&["verify", m1, rep]).status.code(), Some(4));
}

#[test]
fn hill_exits_3_on_non_star_linear_map() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = write_fixture_map(dir.path());
    let out = run(&["hill", &fixture]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());

    // analyze still works and reports the failure plus the rank
    let out = run(&["analyze", &fixture]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["star_linear"], Value::Bool(false));
    assert_eq!(json["m"], Value::from(2));
}

#[test]
fn schema_and_io_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));

    // structurally valid JSON with wrong shape
    let mismatched = dir.path().join("mismatch.json");
    std::fs::write(
        &mismatched,
        r#"{"n":2,"q":2,"representation":"matricization","field":"real","data":[[[1.0,0.0]]]}"#,
    )
    .unwrap();
    assert_eq!(run(&["analyze", mismatched.to_str().unwrap()]).status.code(), Some(2));

    // declared real but carrying an imaginary part
    let complex_in_real = dir.path().join("real.json");
    std::fs::write(
        &complex_in_real,
        r#"{"n":1,"q":1,"representation":"matricization","field":"real","data":[[[1.0,0.5]]]}"#,
    )
    .unwrap();
    assert_eq!(run(&["analyze", complex_in_real.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["analyze", "/nonexistent/map.json"]).status.code(), Some(1));
}

#[test]
fn compare_same_file_gives_identity_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let rep = dir.path().join("rep.json");
    let (map, rep) = (map.to_str().unwrap(), rep.to_str().unwrap());
    run(&["random", "--n", "2", "--q", "2", "--rank", "4", "--seed", "5", "--out", map]);
    run(&["hill", map, "--out", rep]);
    let out = run(&["compare", rep, rep]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    let phi = json["Phi"].as_array().unwrap();
    for (k, row) in phi.iter().enumerate() {
        for (l, entry) in row.as_array().unwrap().iter().enumerate() {
            let re = entry[0].as_f64().unwrap();
            let im = entry[1].as_f64().unwrap();
            let target = if k == l { 1.0 } else { 0.0 };
            assert!((re - target).abs() <= 1e-10 && im.abs() <= 1e-10);
        }
    }
    for key in ["H_PhiHpPhiStar", "Xi_PhiHp", "H_PhiXiStar", "Lhat_rel", "Ahat_rel"] {
        assert!(json["residuals"][key].as_f64().unwrap() <= 1e-12, "{key}");
    }
}

#[test]
fn compare_blocks_vs_qr_and_error_paths() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let rep_blocks = dir.path().join("blocks.json");
    let rep_qr = dir.path().join("qr.json");
    let (map, rep_blocks, rep_qr) = (
        map.to_str().unwrap(),
        rep_blocks.to_str().unwrap(),
        rep_qr.to_str().unwrap(),
    );
    run(&["random", "--n", "3", "--q", "2", "--rank", "5", "--seed", "8", "--out", map]);
    run(&["hill", map, "--strategy", "blocks", "--out", rep_blocks]);
    run(&["hill", map, "--strategy", "qr", "--out", rep_qr]);
    let out = run(&["compare", rep_blocks, rep_qr]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    for key in ["H_PhiHpPhiStar", "Xi_PhiHp", "H_PhiXiStar", "Lhat_rel", "Ahat_rel"] {
        assert!(json["residuals"][key].as_f64().unwrap() <= 1e-9, "{key}");
    }

    // representations of two different maps: exit 4
    let other = dir.path().join("other.json");
    let other_rep = dir.path().join("other_rep.json");
    let (other, other_rep) = (other.to_str().unwrap(), other_rep.to_str().unwrap());
    run(&["random", "--n", "3", "--q", "2", "--rank", "5", "--seed", "80", "--out", other]);
    run(&["hill", other, "--out", other_rep]);
    assert_eq!(run(&["compare", rep_blocks, other_rep]).status.code(), Some(4));

    // provenance stripped: exit 5
    let mut file: HillFile =
        serde_json::from_str(&std::fs::read_to_string(rep_qr).unwrap()).unwrap();
    file.provenance = None;
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, to_json_string(&file)).unwrap();
    assert_eq!(
        run(&["compare", rep_blocks, bare.to_str().unwrap()]).status.code(),
        Some(5)
    );
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let choi = dir.path().join("choi.json");
    let back = dir.path().join("back.json");
    let (map, choi, back) = (map.to_str().unwrap(), choi.to_str().unwrap(), back.to_str().unwrap());
    run(&["random", "--n", "3", "--q", "3", "--rank", "7", "--seed", "13", "--out", map]);
    assert!(run(&["convert", map, "--to", "choi", "--out", choi]).status.success());
    assert!(run(&["convert", choi, "--to", "matricization", "--out", back]).status.success());
    assert_eq!(std::fs::read(map).unwrap(), std::fs::read(back).unwrap());
}

#[test]
fn random_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&["random", "--n", "3", "--q", "2", "--rank", "4", "--seed", "7", "--out", a.to_str().unwrap()]);
    run(&["random", "--n", "3", "--q", "2", "--rank", "4", "--seed", "7", "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn structure_reports_patterns_at_both_levels() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("id.json");
    let map = hillrep::samples::identity_map(3);
    let file = MapFile::from_map(&map, "matricization", "real");
    std::fs::write(&map_path, to_json_string(&file)).unwrap();

    let out = run(&["structure", map_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["star_linear"], Value::Bool(true));
    assert_eq!(json["duality_consistent"], Value::Bool(true));
    let blocks: Vec<&str> = json["block_patterns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let entries: Vec<&str> = json["entry_patterns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(blocks.contains(&"diagonal"));
    assert_eq!(blocks, entries);
}

#[test]
fn apply_evaluates_the_map() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("t.json");
    let map = hillrep::samples::transpose_map(2);
    std::fs::write(
        &map_path,
        to_json_string(&MapFile::from_map(&map, "matricization", "real")),
    )
    .unwrap();
    let v_path = dir.path().join("v.json");
    std::fs::write(&v_path, r#"[[[1.0,0.0],[2.0,0.5]],[[3.0,0.0],[4.0,-1.0]]]"#).unwrap();

    let out = run(&["apply", map_path.to_str().unwrap(), "--matrix", v_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    // transpose: entry (0,1) of the result is the (1,0) entry of the input
    assert_eq!(json["result"][0][1][0].as_f64().unwrap(), 3.0);
    assert_eq!(json["result"][1][0][1].as_f64().unwrap(), 0.5);
}
