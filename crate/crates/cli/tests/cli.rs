use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratakit")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).expect("report is JSON");
    if let (Some(chi), Some(betti)) = (r.get("euler_characteristic"), r.pointer("/homology/betti")) {
        let alternating: i64 = betti
            .as_array()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(n, b)| if n % 2 == 0 { 1 } else { -1 } * b.as_i64().unwrap())
            .sum();
        assert_eq!(chi.as_i64().unwrap(), alternating);
    }
    r
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn punctured_torus_subdivision() {
    let r = report(&["sd", "--fixture", "punctured-torus"]);
    assert_eq!(ints(&r["f_vector"]), vec![3, 4]);
    assert_eq!(ints(&r["homology"]["betti"]), vec![1, 2]);
    assert_eq!(r["homology"]["summary"], "(Z, Z^2)");
    let from_file = report(&["sd", "--file", data("punctured-torus.json").to_str().unwrap()]);
    assert_eq!(from_file["homology"], r["homology"]);
}

#[test]
fn point_line_salvetti() {
    let file = data("point-line.json");
    let r = report(&["arrangement", "salvetti", "--file", file.to_str().unwrap(), "--order", "2"]);
    assert_eq!(ints(&r["details"]["cell_counts"]), vec![2, 2]);
    assert_eq!(ints(&r["homology"]["betti"]), vec![1, 1]);
    let c = report(&["arrangement", "complement", "--fixture", "point-line", "--order", "2"]);
    assert_eq!(c["details"]["strata"], 4);
    assert_eq!(ints(&c["f_vector"]), vec![4, 4]);
}

#[test]
fn arrangement_faces_satisfy_the_euler_identity() {
    for (file, order) in [("generic-lines.json", "1"), ("generic-lines.json", "2"), ("braid-3.json", "2")] {
        let r = report(&["arrangement", "faces", "--file", data(file).to_str().unwrap(), "--order", order]);
        assert_eq!(r["details"]["alternating_sum"], 1);
    }
    let r = report(&["arrangement", "faces", "--file", data("generic-lines.json").to_str().unwrap()]);
    assert_eq!(ints(&r["details"]["dim_counts"]), vec![3, 9, 7]);
    let s = report(&["arrangement", "symmetric", "--fixture", "point-line", "--order", "2"]);
    assert_eq!(s["details"]["strata"], 9);
}

#[test]
fn configuration_spaces() {
    let r = report(&["conf", "--fixture", "loop", "--k", "2"]);
    assert_eq!(ints(&r["homology"]["betti"]), vec![1, 1]);
    let u = report(&["conf", "--fixture", "loop", "--k", "2", "--unordered"]);
    assert_eq!(ints(&u["homology"]["betti"]), vec![1, 1]);
    assert_eq!(u["parameters"]["ordered"], false);
    let y = report(&["conf", "--file", data("y-graph.json").to_str().unwrap(), "--oracle"]);
    assert_eq!(y["details"]["oracle_agrees"], true);
    assert_eq!(y["homology"]["summary"], "(Z, Z, 0)");
    let a = report(&["abrams", "--fixture", "y", "--k", "2", "--subdivide", "3"]);
    assert_eq!(a["homology"]["betti"], y["homology"]["betti"]);
    assert_eq!(a["details"]["conditions"].as_array().unwrap().len(), 0);
}

#[test]
fn dual_and_salvetti_of_a_triangle() {
    let d = report(&["dual", "--fixture", "simplex-2"]);
    assert_eq!(ints(&d["details"]["cell_counts"]), vec![1, 3, 3]);
    let s = report(&["salvetti", "--fixture", "simplex-2"]);
    assert_eq!(s["details"]["isomorphic_to_input"], true);
    let f = report(&["facecat", "--fixture", "circle-minimal"]);
    assert_eq!(f["details"]["parallel_hom_sets"], 1);
    assert_eq!(f["details"]["morphisms"], 2);
}

#[test]
fn homology_of_a_delta_complex_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.json");
    std::fs::write(&path, r#"{"cells":[[0],[7]],"faces":{"1":[[0,0]]}}"#).unwrap();
    let r = report(&["homology", "--file", path.to_str().unwrap()]);
    assert_eq!(ints(&r["f_vector"]), vec![1, 1]);
    assert_eq!(r["homology"]["summary"], "(Z, Z)");
    let s = report(&["homology", "--file", data("circle.json").to_str().unwrap()]);
    assert_eq!(s["homology"]["summary"], "(Z, Z)");
}

#[test]
fn reports_are_byte_identical() {
    let args = ["sd", "--fixture", "torus"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let timed = report(&["sd", "--fixture", "torus", "--timing"]);
    let plain: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(timed["timing"]["elapsed_ms"].is_number());
    assert!(plain.get("timing").is_none());
    assert_eq!(timed["digest"], plain["digest"]);
    let single = Command::new(env!("CARGO_BIN_EXE_stratakit"))
        .args(args)
        .env("STRATAKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, a.stdout);
}

#[test]
fn rank_only_keeps_betti_numbers() {
    let full = report(&["sd", "--fixture", "torus"]);
    let rank = report(&["sd", "--fixture", "torus", "--rank-only"]);
    assert_eq!(full["homology"]["betti"], rank["homology"]["betti"]);
    assert_eq!(rank["parameters"]["rank_only"], true);
    assert_ne!(full["digest"], rank["digest"]);
}

#[test]
fn exit_codes() {
    let invalid = run(&["validate", "--file", data("two-cycle.json").to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&invalid.stdout).unwrap();
    assert_eq!(r["details"]["valid"], false);
    assert!(r["diagnostics"].as_array().unwrap().iter().any(|d| d.as_str().unwrap().contains("acyclicity")));

    let ok = run(&["validate", "--file", data("circle.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"objects":[{"id":0,"grade":"zero"}]}"#).unwrap();
    let parse = run(&["sd", "--file", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("/objects/0/grade"));

    let bad_rational = dir.path().join("arr.json");
    std::fs::write(&bad_rational, r#"{"n":1,"hyperplanes":[{"a":["1/0"],"b":"0"}]}"#).unwrap();
    let parse = run(&["arrangement", "faces", "--file", bad_rational.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("/hyperplanes/0/a/0"));

    let duplicate = dir.path().join("dup.json");
    std::fs::write(&duplicate, r#"{"n":1,"hyperplanes":[{"a":["1"],"b":"0"},{"a":["2"],"b":"0"}]}"#).unwrap();
    assert_eq!(run(&["arrangement", "faces", "--file", duplicate.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["sd", "--file", "/nonexistent/space.json"]).status.code(), Some(1));
    assert_eq!(run(&["sd", "--fixture", "no-such-space"]).status.code(), Some(1));
    assert_eq!(run(&["sd"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let threads = Command::new(env!("CARGO_BIN_EXE_stratakit"))
        .args(["sd", "--fixture", "torus"])
        .env("STRATAKIT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(1));
}

#[test]
fn exports() {
    let dot = run(&["export", "dot", "--fixture", "circle-minimal"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert_eq!(text.matches("n0 -> n1").count(), 2);
    let hasse = String::from_utf8(run(&["export", "dot", "--fixture", "circle-minimal", "--hasse"]).stdout).unwrap();
    assert_eq!(hasse.matches("n0 -> n1").count(), 1);

    let off = String::from_utf8(run(&["export", "off", "--fixture", "simplex-2"]).stdout).unwrap();
    let mut lines = off.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("7 6 12"));
    assert_eq!(off.lines().filter(|l| l.starts_with("3 ")).count(), 6);
    assert_eq!(run(&["export", "off", "--fixture", "simplex-3"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.json");
    let r = report(&["export", "json", "--fixture", "torus", "--out", path.to_str().unwrap()]);
    assert_eq!(r["operation"], "export json");
    let back = report(&["sd", "--file", path.to_str().unwrap()]);
    assert_eq!(back["homology"]["summary"], "(Z, Z^2, Z)");
}

#[test]
fn report_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["sd", "--fixture", "circle-minimal", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(ints(&r["f_vector"]), vec![2, 2]);
}
