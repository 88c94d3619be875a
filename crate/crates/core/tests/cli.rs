use std::path::{Path, PathBuf};

use proper_orient::cli::{run, EXIT_BUDGET, EXIT_FORMAT, EXIT_OK, EXIT_PRECONDITION};
use tempfile::TempDir;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("proper-orient")
        .chain(args.iter().copied())
        .map(std::ffi::OsString::from);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn orient_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "g.txt");
    let (code, _, err) = invoke(&["gen", "grid", "--rows", "6", "--cols", "7", "-o", s(&graph)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let orient = path(&dir, "o.txt");
    let report = path(&dir, "report.json");
    let log = path(&dir, "log.ndjson");
    let (code, _, err) = invoke(&[
        "orient",
        s(&graph),
        "-o",
        s(&orient),
        "--report",
        s(&report),
        "--log",
        s(&log),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["family"], "bipartite");
    let bound = report["guaranteed_bound"].as_u64().unwrap();
    assert!(report["achieved_max"].as_u64().unwrap() <= bound);
    let lines = std::fs::read_to_string(&log).unwrap();
    assert_eq!(lines.lines().count(), report["rounds"].as_array().unwrap().len());
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["round"].is_u64());
    }

    let (code, out, err) = invoke(&["verify", s(&graph), s(&orient), "--bound", &bound.to_string()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["is_proper"], true);
}

#[test]
fn verify_rejects_improper_orientation() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "p3.txt", "0 1\n1 2\n");
    // 0 -> 1 -> 2 gives the adjacent pair 0, 1 outdegree 1 each.
    let orient = write(&dir, "o.txt", "0 1\n1 2\n");
    let (code, out, _) = invoke(&["verify", s(&graph), s(&orient)]);
    assert_eq!(code, EXIT_PRECONDITION);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["is_proper"], false);
}

#[test]
fn malformed_graph_is_a_format_error() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "bad.txt", "0 1 2\n");
    let (code, _, err) = invoke(&["orient", s(&graph)]);
    assert_eq!(code, EXIT_FORMAT);
    assert!(err.contains("line 1"), "{err}");
    let (code, _, _) = invoke(&["gen", "no-such-family"]);
    assert_eq!(code, EXIT_FORMAT);
    let (code, _, _) = invoke(&["orient"]);
    assert_eq!(code, EXIT_FORMAT);
}

#[test]
fn planar_schedule_needs_four_classes() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "k3.txt", "0 1\n1 2\n0 2\n");
    let part = write(&dir, "k3.part", "0 1\n1 2\n2 3\n");
    let (code, _, err) = invoke(&["orient", s(&graph), "--partition", s(&part), "--schedule", "planar4"]);
    assert_eq!(code, EXIT_PRECONDITION, "{err}");
}

#[test]
fn k_below_degeneracy_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "k5.txt");
    invoke(&["gen", "complete", "--n", "5", "-o", s(&graph)]);
    let (code, _, err) = invoke(&["orient", s(&graph), "--k", "1"]);
    assert_eq!(code, EXIT_PRECONDITION, "{err}");
}

#[test]
fn oracle_budget_exit_code() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "k20.txt");
    invoke(&["gen", "complete", "--n", "20", "-o", s(&graph)]);
    let (code, _, err) = invoke(&["exact", s(&graph)]);
    assert_eq!(code, EXIT_BUDGET, "{err}");
}

#[test]
fn mad_and_exact_values() {
    let dir = TempDir::new().unwrap();
    let k33 = path(&dir, "k33.txt");
    invoke(&["gen", "complete_bipartite", "--rows", "3", "--cols", "3", "-o", s(&k33)]);
    let (code, out, _) = invoke(&["mad", s(&k33)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "3");
    let (_, out, _) = invoke(&["mad", s(&k33), "--min-k"]);
    assert_eq!(out.trim(), "2");

    let c4 = path(&dir, "c4.txt");
    invoke(&["gen", "cycle", "--n", "4", "-o", s(&c4)]);
    let (code, out, _) = invoke(&["exact", s(&c4)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "2");
}

#[test]
fn tightness_generator_sizes() {
    let (code, out, _) = invoke(&["gen", "tightness", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.starts_with("# 104 vertices, 103 edges"),
        "{}",
        out.lines().next().unwrap()
    );
}

#[test]
fn runs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "g.txt");
    invoke(&[
        "gen",
        "apollonian",
        "--n",
        "40",
        "--seed",
        "9",
        "-o",
        s(&graph),
        "--partition-out",
        s(&path(&dir, "g.part")),
    ]);
    let mut outputs = Vec::new();
    for round in 0..2 {
        let o = path(&dir, &format!("o{round}.txt"));
        let (code, report, err) = invoke(&[
            "orient",
            s(&graph),
            "--partition",
            s(&path(&dir, "g.part")),
            "--schedule",
            "planar4",
            "-o",
            s(&o),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        outputs.push((std::fs::read_to_string(&o).unwrap(), report));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn verify_missing_edge_is_a_format_error() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "p3.txt", "0 1\n1 2\n");
    let orient = write(&dir, "o.txt", "0 1\n");
    let (code, _, err) = invoke(&["verify", s(&graph), s(&orient)]);
    assert_eq!(code, EXIT_FORMAT);
    assert!(err.contains("1-2"), "{err}");
}

#[test]
fn planar_schedule_rejects_greedy_five_classes() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "k5.txt");
    invoke(&["gen", "complete", "--n", "5", "-o", s(&graph)]);
    let (code, _, err) = invoke(&["orient", s(&graph), "--schedule", "planar4"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("5 parts"), "{err}");
}

#[test]
fn tree_gets_bipartite_bound_and_verbose_lines() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "tree.txt");
    invoke(&["gen", "random_tree", "--n", "60", "--seed", "4", "-o", s(&graph)]);
    let (code, out, err) = invoke(&["-v", "orient", s(&graph), "--schedule", "bipartite"]);
    assert_eq!(code, EXIT_OK, "{err}");
    // Without -o the orientation goes to stdout.
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 59);
    assert_eq!(err.lines().filter(|l| l.starts_with("round ")).count(), 3);
    let o = path(&dir, "o.txt");
    let (_, report, _) = invoke(&["orient", s(&graph), "--schedule", "bipartite", "-o", s(&o)]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["guaranteed_bound"], 4);
}
