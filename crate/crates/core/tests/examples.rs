//! Runs every example binary that `cargo test` built alongside this test.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>/examples
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn every_example_runs_cleanly() {
    let sources = std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/examples")).unwrap();
    let mut names: Vec<String> = sources
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "rs").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    assert!(!names.is_empty());

    let dir = examples_dir();
    let binary = |n: &str| dir.join(format!("{n}{}", std::env::consts::EXE_SUFFIX));
    if names.iter().any(|n| !binary(n).exists()) {
        eprintln!(
            "examples not built in {}; run `cargo test` without a target filter",
            dir.display()
        );
        return;
    }
    for n in &names {
        let out = Command::new(binary(n)).output().unwrap();
        assert!(
            out.status.success(),
            "example {n} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "example {n} printed nothing");
    }
}
