use std::io::Write;
use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use cseq_planarity::generate::{complete, complete_bipartite, octahedron, petersen};
use cseq_planarity::{test_planarity, Certificate, Graph};
use cseq_planarity_cli::{
    format_graph, parse_graph, render, run, verify_certificate, CertificateJson, Cli, CliError,
    Format, EXIT_ERROR, EXIT_NO, EXIT_OK,
};
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
    p
}

fn invoke(args: &[&str]) -> (Result<i32, CliError>, String) {
    let cli = Cli::try_parse_from(std::iter::once("planarity").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let code = run(cli, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_planarity")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn graph_format_round_trips() {
    let g = petersen();
    let h = parse_graph(&format_graph(&g)).unwrap();
    assert!(h.same_structure(&g));
}

#[test]
fn graph_format_allows_comments_and_isolated_vertices() {
    let g = parse_graph("# triangle plus a point\nn 4\n0 1\n1 2 # edge\n\n2 0\n").unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 3));
}

#[test]
fn graph_format_errors_name_the_line() {
    let bad = [
        ("0 1\n", 1),
        ("n 3\n0 x\n", 2),
        ("n 3\n0 1\n1 5\n", 3),
        ("n 3\nn 3\n", 2),
        ("n 3\n0 1 2\n", 2),
    ];
    for (text, line) in bad {
        match parse_graph(text) {
            Err(CliError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    assert!(matches!(parse_graph("# nothing\n"), Err(CliError::Parse { .. })));
}

#[test]
fn json_certificates_round_trip_and_verify() {
    for g in [octahedron(), complete(5), complete_bipartite(3, 3)] {
        let c = test_planarity(&g);
        let json = serde_json::to_string(&CertificateJson::from(&c)).unwrap();
        let back = Certificate::try_from(serde_json::from_str::<CertificateJson>(&json).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&g, &back).ok);
    }
}

#[test]
fn json_certificate_needs_its_fields() {
    let j: CertificateJson = serde_json::from_str(r#"{"planar": false, "kind": "K5"}"#).unwrap();
    assert!(matches!(Certificate::try_from(j), Err(CliError::Certificate(_))));
    let j: CertificateJson =
        serde_json::from_str(r#"{"planar": false, "kind": "K7", "branch": [], "paths": []}"#).unwrap();
    assert!(matches!(Certificate::try_from(j), Err(CliError::Certificate(_))));
}

#[test]
fn text_output_reports_faces_and_witness() {
    let g = octahedron();
    let s = render(&g, &test_planarity(&g), Format::Text);
    assert!(s.starts_with("planar\nfaces 8\n"));
    assert_eq!(s.lines().count(), 2 + 6);

    let g = complete_bipartite(3, 3);
    let s = render(&g, &test_planarity(&g), Format::Text);
    assert!(s.starts_with("nonplanar K3,3\nbranch "));
    assert_eq!(s.lines().filter(|l| l.starts_with("path ")).count(), 9);
}

#[test]
fn dot_output_marks_the_witness() {
    let g = complete(5);
    let s = render(&g, &test_planarity(&g), Format::Dot);
    assert!(s.starts_with("graph G {"));
    assert_eq!(s.matches("color=red, penwidth").count(), 10);
    assert_eq!(s.matches("fillcolor=red").count(), 5);
}

#[test]
fn test_command_exit_codes() {
    let dir = TempDir::new().unwrap();
    let planar = write(&dir, "oct.txt", &format_graph(&octahedron()));
    let nonplanar = write(&dir, "k5.txt", &format_graph(&complete(5)));
    let (code, out) = invoke(&["test", planar.to_str().unwrap(), "--certify"]);
    assert_eq!(code.unwrap(), EXIT_OK);
    assert!(out.starts_with("planar"));
    let (code, out) = invoke(&["test", nonplanar.to_str().unwrap(), "--certify", "--jobs", "2"]);
    assert_eq!(code.unwrap(), EXIT_NO);
    assert!(out.starts_with("nonplanar K5"));
    let (code, _) = invoke(&["test", dir.path().join("missing").to_str().unwrap()]);
    assert!(matches!(code, Err(CliError::Io { .. })));
}

#[test]
fn verify_command_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let g = complete_bipartite(3, 3);
    let gp = write(&dir, "k33.txt", &format_graph(&g));
    let (_, json) = invoke(&["test", gp.to_str().unwrap(), "--format", "json"]);
    let cert = write(&dir, "cert.json", &json);
    let (code, out) = invoke(&["verify", gp.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(code.unwrap(), EXIT_OK, "{out}");

    // the same witness against a graph missing one of its edges
    let mut h = Graph::with_vertices(6);
    for (_, a, b) in g.edges().skip(1) {
        h.add_edge(a, b).unwrap();
    }
    let hp = write(&dir, "h.txt", &format_graph(&h));
    let (code, _) = invoke(&["verify", hp.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(code.unwrap(), EXIT_NO);
}

#[test]
fn cseq_command_prints_a_checked_sequence() {
    let dir = TempDir::new().unwrap();
    let gp = write(&dir, "oct.txt", &format_graph(&octahedron()));
    let (code, out) = invoke(&["cseq", gp.to_str().unwrap(), "--verify"]);
    assert_eq!(code.unwrap(), EXIT_OK);
    assert_eq!(out.lines().next(), Some("canonical"));
    assert!(out.lines().any(|l| l.starts_with("# ")));

    let path = write(&dir, "path.txt", "n 3\n0 1\n1 2\n");
    let (code, _) = invoke(&["cseq", path.to_str().unwrap()]);
    assert!(matches!(code, Err(CliError::Input(_))));
}

#[test]
fn gen_and_oracle_agree_with_known_answers() {
    let (code, out) = invoke(&["gen", "petersen"]);
    assert_eq!(code.unwrap(), EXIT_OK);
    let g = parse_graph(&out).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));

    let (_, out) = invoke(&["gen", "random-planar", "--n", "30", "--seed", "4"]);
    let g = parse_graph(&out).unwrap();
    assert!(test_planarity(&g).is_planar());

    let dir = TempDir::new().unwrap();
    let k33 = write(&dir, "k33.txt", &format_graph(&complete_bipartite(3, 3)));
    let (code, out) = invoke(&["oracle", k33.to_str().unwrap()]);
    assert_eq!((code.unwrap(), out.as_str()), (EXIT_NO, "nonplanar\n"));
    let k7 = write(&dir, "k7.txt", &format_graph(&complete(7)));
    let (code, _) = invoke(&["oracle", k7.to_str().unwrap()]);
    assert!(matches!(code, Err(CliError::Input(_))));
}

#[test]
fn bench_reports_each_size() {
    let (code, out) = invoke(&["bench", "--sizes", "100,200", "--repeat", "1"]);
    assert_eq!(code.unwrap(), EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n 100 "));
    assert!(lines[1].contains("ratio"));
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "oct.txt", &format_graph(&octahedron()));
    let pet = write(&dir, "pet.txt", &format_graph(&petersen()));
    let bad = write(&dir, "bad.txt", "n 2\n0 7\n");
    assert_eq!(binary(&["test", oct.to_str().unwrap()]).0, EXIT_OK);
    assert_eq!(binary(&["test", pet.to_str().unwrap()]).0, EXIT_NO);
    assert_eq!(binary(&["test", bad.to_str().unwrap()]).0, EXIT_ERROR);
    assert_eq!(binary(&["no-such-command"]).0, EXIT_ERROR);
}
