use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rado(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rado")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rado-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_then_decode_round_trips() {
    for depth in [0, 1, 5, 11, 16] {
        let d = depth.to_string();
        let tree = rado(&["build-tree", "--depth", &d]);
        assert!(tree.status.success());
        let path = scratch(&format!("tree{depth}.json"));
        std::fs::write(&path, &tree.stdout).unwrap();
        let out = json(&rado(&["decode", "--tree", path.to_str().unwrap()]));
        let g = rado_ramsey::AdjacencyOracle::Bit.graph(depth).unwrap();
        assert_eq!(out["n"], depth);
        assert_eq!(out["graph6"], rado_ramsey::rado::graph6::encode(&g));
        assert_eq!(out["schema_version"], 1);
    }
}

#[test]
fn decode_reads_stdin() {
    let tree = rado(&["build-tree", "--depth", "4"]).stdout;
    let mut child = Command::new(env!("CARGO_BIN_EXE_rado"))
        .args(["decode"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&tree).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["n"], 4);
}

#[test]
fn exit_codes() {
    assert_eq!(rado(&["diagonal", "--nodes", "00,0110,10111"]).status.code(), Some(0));
    assert_eq!(rado(&["diagonal", "--nodes", "0,1"]).status.code(), Some(1));
    assert_eq!(rado(&["diagonal", "--nodes", "00,01,1"]).status.code(), Some(1));
    assert_eq!(rado(&["similar", "--a", "e,0,1", "--b", "0,00,01"]).status.code(), Some(0));
    assert_eq!(rado(&["similar", "--a", "e,0,1", "--b", "e,0,11"]).status.code(), Some(1));
    // usage, input and depth errors
    assert_eq!(rado(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rado(&["canon", "--nodes", "0,2"]).status.code(), Some(2));
    assert_eq!(rado(&["build-tree", "--depth", "65"]).status.code(), Some(2));
    assert_eq!(rado(&["hl-search", "--context", "/nonexistent.json", "--coloring", "const:0"]).status.code(), Some(2));
    let bad = scratch("bad.g6");
    std::fs::write(&bad, "~~not graph6").unwrap();
    let arg = format!("file:{}", bad.display());
    assert_eq!(rado(&["degrees", "--graph", &arg]).status.code(), Some(2));
    // materialization budget
    assert_eq!(rado(&["build-tree", "--depth", "21"]).status.code(), Some(3));
    assert_eq!(rado(&["rank", "--symbolic", "2"]).status.code(), Some(0));
}

#[test]
fn max_depth_from_environment() {
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_rado"))
            .env("RADO_MAX_DEPTH", env)
            .args(["build-tree", "--depth", "10"])
            .output()
            .unwrap()
    };
    assert_eq!(run("8").status.code(), Some(2));
    assert!(run("12").status.success());
    let flag = rado(&["--max-depth", "8", "build-tree", "--depth", "10"]);
    assert_eq!(flag.status.code(), Some(2));
}

#[test]
fn formats() {
    let dot = rado(&["build-tree", "--depth", "3", "--format", "dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("doublecircle").count(), 3);
    let text = rado(&["types", "--n", "2", "--format", "text"]);
    assert!(text.status.success());
    assert_eq!(rado(&["devlin", "--n", "2", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn counts_on_the_command_line() {
    assert_eq!(json(&rado(&["types", "--n", "3"]))["count"], 112);
    assert_eq!(json(&rado(&["types", "--n", "3", "--kind", "order-only"]))["count"], 16);
    assert_eq!(json(&rado(&["devlin", "--n", "3"]))["count"], 16);
    assert_eq!(json(&rado(&["degrees", "--graph", "name:K2"]))["count"], 2);
    assert_eq!(json(&rado(&["degrees", "--graph", "g6:A_"]))["count"], 2);
    let order = json(&rado(&["types", "--n", "2", "--mode", "order", "--witness"]));
    assert_eq!(order["count"], 2);
    assert!(order["witnesses"].is_object());
    assert!(json(&rado(&["degrees", "--graph", "name:P3"])).get("ordered").is_none());
    assert_eq!(json(&rado(&["degrees", "--graph", "name:P3", "--ordered"]))["ordered"].as_array().unwrap().len(), 3);
}

#[test]
fn witness_is_recanonicalized() {
    let w = json(&rado(&["witness", "--nodes", "00,0110,10111", "--kind", "order-only", "--free"]));
    let nodes: Vec<&str> = w["witness"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let list = nodes.join(",");
    let again = json(&rado(&["witness", "--nodes", &list, "--kind", "order-only", "--free"]));
    assert_eq!(w["digest"], again["digest"]);
    assert_eq!(rado(&["diagonal", "--nodes", &list]).status.code(), Some(0));
}

#[test]
fn certificates_verify_and_tampering_is_caught() {
    let cert = scratch("cert.json");
    let found = rado(&["hl-search", "--worked", "--coloring", "hash:11:2", "--output", cert.to_str().unwrap()]);
    assert_eq!(found.status.code(), Some(0));
    let c = cert.to_str().unwrap();
    assert_eq!(rado(&["verify", "--certificate", c, "--coloring", "hash:11:2"]).status.code(), Some(0));
    let mut v: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    let key = if v.get("certificate").is_some() { "certificate" } else { "" };
    let body = if key.is_empty() { &mut v } else { &mut v[key] };
    let color = body["color"].as_u64().unwrap();
    body["color"] = (1 - color).into();
    let tampered = scratch("tampered.json");
    std::fs::write(&tampered, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = rado(&["verify", "--certificate", tampered.to_str().unwrap(), "--coloring", "hash:11:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn fronts_and_ranks() {
    let fam = scratch("family.json");
    let out = rado(&["fronts", "--worked", "--ambient-depth", "6", "--depth", "6", "--output", fam.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rank = json(&rado(&["rank", "--family", fam.to_str().unwrap()]));
    assert_eq!(rank["rank"], "21");
    let sym = json(&rado(&["rank", "--symbolic", "2"]));
    assert_eq!(sym["rank"], "ω^2");
}
