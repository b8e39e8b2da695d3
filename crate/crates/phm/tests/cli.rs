//! End-to-end tests of the phm-bench binary: flags, exit codes, and the CSV
//! report on stdout or --out.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phm::trace::{write_trace, TraceFormat};
use phm::FiveTuple;

const CSV_HEADER: &str =
    "engine,packets,rules,repetition,elapsed_seconds,matches,energy_evals,cache_hits";

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phm-bench"))
        .args(args)
        .output()
        .expect("failed to spawn phm-bench")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn write_demo_rules(dir: &Path) -> PathBuf {
    let path = dir.join("rules.txt");
    std::fs::write(
        &path,
        "# demo rules\n1,10.0.0.1,80,10.0.0.2,443,6\n2,192.168.1.1,53,8.8.8.8,53,17\n",
    )
    .unwrap();
    path
}

#[test]
fn help_exits_zero_and_documents_the_interface() {
    let output = bench(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for flag in [
        "--rules",
        "--trace",
        "--gen",
        "--engine",
        "--repeat",
        "--baseline-alg",
        "--cache",
        "--out",
    ] {
        assert!(text.contains(flag), "help is missing {flag}");
    }
    assert!(text.contains("Exit codes"));
}

#[test]
fn missing_arguments_exit_one() {
    let output = bench(&[]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("--rules"));

    let output = bench(&["--rules", "r.txt"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn trace_and_gen_together_exit_one() {
    let output = bench(&["--rules", "r.txt", "--trace", "t.csv", "--gen", "count=10"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("cannot be used with"));
}

#[test]
fn malformed_gen_spec_exits_one() {
    let output = bench(&["--rules", "r.txt", "--gen", "seed=5"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("count"));
}

#[test]
fn nonexistent_rules_file_exits_one() {
    let output = bench(&["--rules", "/nonexistent/rules.txt", "--gen", "count=10"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("rules"));
}

#[test]
fn generated_run_prints_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--gen",
        "count=500,seed=3,match=0.5",
        "--repeat",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));

    let csv = stdout(&output);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 4); // 2 engines x 2 repetitions
    assert!(lines[1].starts_with("phm,500,2,1,"));
    assert!(lines[2].starts_with("phm,500,2,2,"));
    assert!(lines[3].starts_with("baseline,500,2,1,"));
    assert!(lines[4].starts_with("baseline,500,2,2,"));
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[5], "250"); // floor(500 * 0.5) matching headers
    }

    let summary = stderr(&output);
    assert!(summary.contains("500 packets against 2 rules"));
    assert!(summary.contains("speedup:"));
}

#[test]
fn single_engine_run_omits_the_other_rows() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--gen",
        "count=100,seed=1",
        "--engine",
        "phm",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout(&output);
    assert!(csv.contains("\nphm,"));
    assert!(!csv.contains("\nbaseline,"));
    assert!(!stderr(&output).contains("speedup:"));
}

#[test]
fn out_flag_writes_the_csv_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let report = dir.path().join("report.csv");
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--gen",
        "count=50,seed=9",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).is_empty());
    let written = std::fs::read_to_string(&report).unwrap();
    assert!(written.starts_with(CSV_HEADER));
    assert_eq!(written.lines().count(), 1 + 2);
}

#[test]
fn reads_a_csv_trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let trace = dir.path().join("trace.csv");
    std::fs::write(
        &trace,
        "# two headers, one matching\n10.0.0.1,80,10.0.0.2,443,6\n9.9.9.9,1,8.8.8.8,2,3\n",
    )
    .unwrap();
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let lines: Vec<String> = stdout(&output).lines().map(String::from).collect();
    assert!(lines[1].starts_with("phm,2,2,1,"));
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[5], "1");
}

#[test]
fn reads_a_binary_trace_file_by_magic() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let trace = dir.path().join("trace.pht");
    let headers = vec![
        FiveTuple::parse_csv("10.0.0.1,80,10.0.0.2,443,6").unwrap(),
        FiveTuple::parse_csv("192.168.1.1,53,8.8.8.8,53,17").unwrap(),
        FiveTuple::parse_csv("1.2.3.4,5,6.7.8.9,10,11").unwrap(),
    ];
    write_trace(&trace, &headers, TraceFormat::Pht1).unwrap();
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--baseline-alg",
        "horspool",
        "--cache",
        "fresh",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let lines: Vec<String> = stdout(&output).lines().map(String::from).collect();
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[1], "3");
    assert_eq!(cells[5], "2");
}

#[test]
fn corrupt_trace_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let rules = write_demo_rules(dir.path());
    let trace = dir.path().join("trace.pht");
    std::fs::write(&trace, b"PHT1\x00\x00\x00\x00\x00\x00\x00\x02only13bytes__").unwrap();
    let output = bench(&[
        "--rules",
        rules.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("trace"));
}

#[test]
fn bogus_flag_values_exit_one() {
    let output = bench(&[
        "--rules", "r.txt", "--gen", "count=10", "--engine", "quantum",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let output = bench(&[
        "--rules",
        "r.txt",
        "--gen",
        "count=10",
        "--baseline-alg",
        "kmp",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let output = bench(&["--rules", "r.txt", "--gen", "count=10", "--repeat", "0"]);
    assert_eq!(output.status.code(), Some(1));
}
