use std::path::PathBuf;
use std::process::{Command, Output};

use pch_core::io::write_graph;
use pch_core::{Certificate, ColouredComplete};
use serde_json::Value;

fn pch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pch")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn two_colour_example_has_no_hamiltonian_cycle() {
    let g = scratch("be1.txt");
    let gen = pch(&["gen", "--family", "be", "--k", "1", "--out", g.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    let out = pch(&["oracle", "--query", "hamcycle", "--input", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], "not exists");
    assert_eq!(r["instance"]["n"], 5);
}

#[test]
fn valid_and_invalid_certificates() {
    let g = scratch("rainbow6.txt");
    std::fs::write(&g, write_graph(&ColouredComplete::rainbow(6))).unwrap();
    let good = scratch("good.json");
    std::fs::write(&good, Certificate::ham_cycle((0..6).collect()).to_json()).unwrap();
    let out = pch(&["verify", "--input", g.to_str().unwrap(), "--cert", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["verdict"], "valid");

    let bad = scratch("bad.json");
    std::fs::write(&bad, Certificate::ham_cycle(vec![0, 1, 2, 3, 4]).to_json()).unwrap();
    let out = pch(&["verify", "--input", g.to_str().unwrap(), "--cert", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_reports_line_and_column() {
    let g = scratch("broken.txt");
    std::fs::write(&g, "4 2\n0 1 0\n1 x\n0\n").unwrap();
    let out = pch(&["oracle", "--query", "hampath", "--input", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.txt:3:3"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pch(&["lemma-check", "--lemma", "nope"]).status.code(), Some(2));
    assert_eq!(pch(&["gen", "--family", "be"]).status.code(), Some(2));
    assert_eq!(pch(&["constants", "--eps", "0.3"]).status.code(), Some(2));
}

#[test]
fn abspath_lemma_check_passes_at_fifty() {
    let out = pch(&["lemma-check", "--lemma", "abspath", "--n", "50", "--eps", "0.1", "--seeds", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "pass");
    for inst in r["result"]["instances"].as_array().unwrap() {
        assert!(inst["min_count"].as_u64().unwrap() >= 15625);
    }
}

#[test]
fn constants_at_one_tenth() {
    let out = pch(&["constants", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["depth_cap"], 9);
    assert!((r["result"]["ifar_cap"].as_f64().unwrap() - 200.0).abs() < 1e-6);
    assert_eq!(r["seed"], 0);
}

#[test]
fn reports_are_reproducible_and_written_to_file() {
    let g = scratch("rand.txt");
    let gen = |out: &str| {
        pch(&["gen", "--family", "random", "--n", "10", "--dmax", "4", "--seed", "3", "--out", out]);
        std::fs::read_to_string(out).unwrap()
    };
    let a = gen(g.to_str().unwrap());
    let h = scratch("rand2.txt");
    assert_eq!(a, gen(h.to_str().unwrap()));

    let rep = scratch("solve.json");
    let args = [
        "solve", "--method", "pipeline", "--fallback", "exact", "--seed", "7", "--input", g.to_str().unwrap(),
        "--report", rep.to_str().unwrap(),
    ];
    let first = pch(&args);
    assert!(first.stdout.is_empty());
    let r1: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let code = first.status.code();
    pch(&args);
    let r2: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r1["result"], r2["result"]);
    assert_eq!(r1["seed"], 7);
    assert_eq!(code, Some(if r1["verdict"] == "not exists" { 1 } else { 0 }));
}

#[test]
fn every_generator_family_round_trips_through_solve() {
    let cases: [&[&str]; 4] = [
        &["--family", "oriented", "--n", "6", "--density", "0.7"],
        &["--family", "t2m", "--m", "2"],
        &["--family", "layered", "--n", "7", "--l", "2"],
        &["--family", "random", "--n", "9", "--dmax", "3"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let g = scratch(&format!("fam{i}.txt"));
        let mut args = vec!["gen"];
        args.extend_from_slice(case);
        args.extend(["--out", g.to_str().unwrap()]);
        assert_eq!(pch(&args).status.code(), Some(0), "{case:?}");
        let out = pch(&["solve", "--method", "exact", "--input", g.to_str().unwrap()]);
        let code = out.status.code().unwrap();
        let verdict = report(&out)["verdict"].as_str().unwrap().to_string();
        assert_eq!(code, if verdict == "exists" { 0 } else { 1 }, "{case:?}");
    }
}
