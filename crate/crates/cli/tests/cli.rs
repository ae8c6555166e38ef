use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use overfull_core::edge_color::{check_proper, EdgeColoring};
use overfull_core::Multigraph;
use serde_json::Value;

fn overfull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overfull")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("overfull-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen_file(name: &str, args: &[&str]) -> PathBuf {
    let path = scratch(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--format", "text", "--out", path.to_str().unwrap()]);
    let out = overfull(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn read_graph(p: &Path) -> Multigraph {
    Multigraph::parse_edge_list(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_petersen_minus_vertex() {
    let g = read_graph(&gen_file("ps.txt", &["petersen-minus-vertex"]));
    assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
    let mut degs = g.degrees().to_vec();
    degs.sort();
    assert_eq!(degs, vec![2, 2, 2, 3, 3, 3, 3, 3, 3]);
}

#[test]
fn gen_complete_and_circulant() {
    let k6 = read_graph(&gen_file("k6.txt", &["complete", "6"]));
    assert_eq!((k6.vertex_count(), k6.edge_count(), k6.max_degree()), (6, 15, 5));
    let c = read_graph(&gen_file("c84.txt", &["circulant", "8", "4"]));
    assert!(c.is_regular() && c.is_simple());
    assert_eq!((c.vertex_count(), c.max_degree()), (8, 4));
}

#[test]
fn gen_random_is_seeded() {
    let a = overfull(&["gen", "random", "9", "0.5", "2", "--seed", "4", "--format", "text"]);
    let b = overfull(&["gen", "random", "9", "0.5", "2", "--seed", "4", "--format", "text"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn json_graph_files_are_accepted() {
    let path = scratch("ps.json");
    let out = overfull(&["gen", "petersen-minus-vertex", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let g: Multigraph = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
    let out = overfull(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["results"]["chromatic_index"], 4);

    let bad = scratch("loop.json");
    std::fs::write(&bad, r#"{"vertices": 2, "pairs": [[0, 0, 1]]}"#).unwrap();
    assert_eq!(overfull(&["classify", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn classify_examples() {
    let ps = gen_file("ps-c.txt", &["petersen-minus-vertex"]);
    let out = overfull(&["classify", "--input", ps.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = &json_of(&out)["results"];
    assert_eq!(r["chromatic_index"], 4);
    assert_eq!(r["class"], 2);
    assert_eq!(r["critical"], true);
    assert_eq!(r["overfull"]["mode"], "absent-exhaustive");
    assert_eq!(r["conjecture"]["biconditional_holds"], false);
    assert_eq!(r["conjecture"]["above_third"], false);

    let k5 = gen_file("k5-c.txt", &["complete", "5"]);
    let out = overfull(&["classify", "--input", k5.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!(r["chromatic_index"], 5);
    assert_eq!(r["overfull"]["mode"], "found");

    let k6 = gen_file("k6-c.txt", &["complete", "6"]);
    let out = overfull(&["classify", "--input", k6.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!((r["chromatic_index"].as_u64(), r["class"].as_u64()), (Some(5), Some(1)));
}

#[test]
fn classify_respects_max_n() {
    let k6 = gen_file("k6-m.txt", &["complete", "6"]);
    let out = overfull(&["classify", "--input", k6.to_str().unwrap(), "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!(r["partial"], true);
    assert!(r.get("chromatic_index").is_none());
}

#[test]
fn pipeline_k6_writes_verified_coloring() {
    let k6 = gen_file("k6-p.txt", &["complete", "6"]);
    let report = scratch("k6-report.json");
    let out = overfull(&[
        "pipeline", "--input", k6.to_str().unwrap(), "--eta", "1/6", "--rescue", "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["results"]["decomposition"]["outcome"]["status"], "complete");
    let file = r["results"]["coloring"]["file"].as_str().unwrap();
    let g = read_graph(&k6);
    let c = EdgeColoring::parse_text(&g, 5, &std::fs::read_to_string(file).unwrap()).unwrap();
    assert!(c.is_total() && check_proper(&g, &c).unwrap().proper);
    assert_eq!(c.colors_used(), 5);
}

#[test]
fn pipeline_k5_is_a_structured_failure() {
    let k5 = gen_file("k5-p.txt", &["complete", "5"]);
    let out = overfull(&["pipeline", "--input", k5.to_str().unwrap(), "--eta", "1/6", "--rescue"]);
    assert_eq!(out.status.code(), Some(2));
    let o = &json_of(&out)["results"]["decomposition"]["outcome"];
    assert_eq!(o["status"], "failed");
    assert_eq!(o["step"], "regularize");
}

#[test]
fn pipeline_rejects_tiny_eta() {
    let k6 = gen_file("k6-e.txt", &["complete", "6"]);
    let out = overfull(&["pipeline", "--input", k6.to_str().unwrap(), "--eta", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("η ≥ 1/6"));
}

#[test]
fn pipeline_reports_are_reproducible() {
    let g = gen_file("rnd.txt", &["random", "10", "0.7", "1", "--seed", "3"]);
    let run = || {
        let mut v = json_of(&overfull(&["pipeline", "--input", g.to_str().unwrap(), "--eta", "1/4", "--seed", "9", "--rescue"]));
        v["results"].as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(overfull(&["gen", "complete", "x"]).status.code(), Some(1));
    assert_eq!(overfull(&["gen", "cycle", "2"]).status.code(), Some(1));
    assert_eq!(overfull(&["classify", "--input", "/nonexistent/graph.txt"]).status.code(), Some(1));
    assert_eq!(overfull(&["pipeline"]).status.code(), Some(1));
    assert_eq!(overfull(&["--help"]).status.code(), Some(0));
}
