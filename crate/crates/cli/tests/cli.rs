use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn slowcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slowcolor")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_slowcolor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn solve_values() {
    for (graph, value) in [("prism", 12), ("path:5", 7), ("complete:3", 6), ("star:4", 6), ("empty:3", 3)] {
        let out = slowcolor(&["solve", "--graph", graph]);
        assert_eq!(out.status.code(), Some(0), "{graph}");
        assert_eq!(json(&out)["value"], value, "{graph}");
    }
    let strict = slowcolor(&["solve", "--graph", "bipartite:2,3", "--strict"]);
    assert_eq!(json(&strict)["value"], json(&slowcolor(&["solve", "--graph", "bipartite:2,3"]))["value"]);
}

#[test]
fn exit_codes() {
    assert_eq!(slowcolor(&["solve", "--graph", "complete:20"]).status.code(), Some(2));
    assert_eq!(slowcolor(&["solve", "--graph", "nonsense"]).status.code(), Some(1));
    assert_eq!(slowcolor(&["verify", "nonsharp", "--graph", "prism", "--k", "1"]).status.code(), Some(1));
    assert_eq!(slowcolor(&["verify", "bogus", "--graph", "prism"]).status.code(), Some(1));
    assert_eq!(slowcolor(&["verify", "main", "--graph", "prism", "--cap", "4"]).status.code(), Some(2));
    // a closed-form mismatch is a verification failure; none exist on paths
    assert_eq!(slowcolor(&["sweep", "--sweep", "path:1..8"]).status.code(), Some(0));
}

#[test]
fn graph_files() {
    let dir = std::env::temp_dir().join(format!("slowcolor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let edges = dir.join("p4.txt");
    std::fs::write(&edges, "# a path\n4 3\n0 1\n1 2\n2 3\n").unwrap();
    let out = slowcolor(&["solve", "--graph", edges.to_str().unwrap()]);
    assert_eq!(json(&out)["value"], 6);
    assert_eq!(json(&out)["graph"], "p4");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "3 1\n0 0\n").unwrap();
    let out = slowcolor(&["solve", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn memo_cache_round_trip() {
    let path = std::env::temp_dir().join(format!("slowcolor-memo-{}.json", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let args = ["solve", "--graph", "cube", "--memo-cache", path.to_str().unwrap()];
    let cold = json(&slowcolor(&args));
    let warm = json(&slowcolor(&args));
    assert_eq!(cold["value"], 13);
    assert_eq!(warm["value"], 13);
    assert_eq!(warm["nodes_expanded"], 0);
    // a cache for another graph is ignored, not trusted
    let other = slowcolor(&["solve", "--graph", "prism", "--memo-cache", path.to_str().unwrap()]);
    assert_eq!(json(&other)["value"], 12);
}

#[test]
fn verify_reports() {
    let out = slowcolor(&["verify", "main", "--graph", "complete:4", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["checks"][0]["computed"], 10);
    assert_eq!(r["checks"][0]["stated"], 7);

    let out = slowcolor(&["verify", "tree-char", "--graph", "star:4"]);
    assert_eq!(json(&out)["verdict"], "holds");

    let out = slowcolor(&["verify", "all", "--graph", "path:5"]);
    assert_eq!(out.status.code(), Some(0));
    let verdicts: Vec<String> = json(&out).as_array().unwrap().iter().map(|r| r["verdict"].to_string()).collect();
    assert!(verdicts.iter().any(|v| v == "\"hypotheses-unmet\""));
    assert!(verdicts.iter().any(|v| v == "\"holds\""));

    let out = slowcolor(&["verify", "all", "--suite", "standard", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["fails"], 0);
}

#[test]
fn construct_certificates() {
    let out = slowcolor(&["construct", "--graph", "prism", "--delete", "3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["certificate_labels"], serde_json::json!([["1", "2"], ["5", "6"]]));
    assert_eq!(r["context"]["betas"], serde_json::json!([0, 5]));

    let out = slowcolor(&["construct", "--graph", "prism"]);
    assert_eq!(json(&out)["certificate_labels"], serde_json::json!([["1", "4"], ["2", "5"], ["3", "6"]]));

    let out = slowcolor(&["construct", "--graph", "prism", "--delete", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not independent"));

    // one deleted vertex: odd branch, the lone beta-vertex is split off
    let out = slowcolor(&["construct", "--graph", "complete:4", "--delete", "0"]);
    let r = json(&out);
    assert_eq!(r["split_off"], 1);
    assert_eq!(r["certificate"]["edges"], serde_json::json!([[2, 3]]));
}

#[test]
fn play_rejects_illegal_replies_and_saves_transcripts() {
    let path = std::env::temp_dir().join(format!("slowcolor-play-{}.json", std::process::id()));
    // the engine opens with the triangle {1,2,3}
    let out = with_stdin(
        &["play", "--graph", "prism", "--role", "painter", "--transcript", path.to_str().unwrap()],
        "1,2\n\n1\n",
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("engine marks {1,2,3}"), "{text}");
    assert!(text.contains("rejected: not-independent: vertices 1 and 2 adjacent"), "{text}");
    assert!(text.contains("rejected: not-maximal: vertex 1 addable"), "{text}");
    assert_eq!(out.status.code(), Some(1), "input ends mid-game");
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["moves"].as_array().unwrap().len(), 1);
    assert_eq!(saved["score"], 3);
}

#[test]
fn play_full_game_as_lister() {
    // marking everything each round on P3 against the exact Painter
    let out = with_stdin(&["play", "--graph", "path:3", "--role", "lister"], "0 1 2\n1\n");
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("final score 4"), "{text}");
    assert!(text.contains("game value 4"), "{text}");
}

#[test]
fn sweeps() {
    let out = slowcolor(&["sweep", "--sweep", "star:2..6"]);
    assert_eq!(out.status.code(), Some(0));
    for row in json(&out).as_array().unwrap() {
        assert_eq!(row["value"], row["closed_form"]);
    }
    let out = slowcolor(&["sweep", "--sweep", "trees:6", "--claim", "tree-char"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 6);
    let out = slowcolor(&["sweep", "--sweep", "prism", "--adversarial", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r[0]["sweep"]["coverage"], 1.0);
    assert!(r[0]["sweep"]["min_score"].as_u64().unwrap() >= 10);
}
