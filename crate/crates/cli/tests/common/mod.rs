#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn quist() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quist"))
}

/// Fixture name plus the extra `cluster` flags used for it.
pub const CORPUS: &[(&str, &[&str])] = &[
    ("outliers.csv", &["--column", "0"]),
    ("indivisible.csv", &[]),
    ("constant.csv", &[]),
    ("latency.csv", &["--header", "--column", "latency"]),
    (
        "latency.csv",
        &["--header", "--column", "latency", "--max-clusters", "3"],
    ),
    (
        "mixed.jsonl",
        &[
            "--format",
            "jsonl",
            "--column",
            "reading",
            "--min-size",
            "2",
            "--threshold",
            "0.5",
        ],
    ),
];

pub fn case_stem(index: usize) -> String {
    let (file, _) = CORPUS[index];
    format!("{index:02}_{}", file.replace('.', "_"))
}

pub struct CaseOutput {
    pub status: i32,
    pub json: Vec<u8>,
    pub report: Vec<u8>,
    pub assignments: Vec<u8>,
}

/// Runs one corpus case through the binary, writing into `dir`.
pub fn run_case(index: usize, dir: &Path) -> CaseOutput {
    let (file, flags) = CORPUS[index];
    let stem = case_stem(index);
    let json = dir.join(format!("{stem}.json"));
    let report = dir.join(format!("{stem}.report.txt"));
    let assignments = dir.join(format!("{stem}.assignments.csv"));
    let status = quist()
        .arg("cluster")
        .arg("--input")
        .arg(fixtures_dir().join(file))
        .args(flags)
        .arg("--output")
        .arg(&json)
        .arg("--report")
        .arg(&report)
        .arg("--assignments")
        .arg(&assignments)
        .status()
        .expect("binary runs")
        .code()
        .unwrap_or(-1);
    let read = |p: &Path| std::fs::read(p).unwrap_or_default();
    CaseOutput {
        status,
        json: read(&json),
        report: read(&report),
        assignments: read(&assignments),
    }
}
