#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn entropic(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Writes a fixture into `dir` and returns its path.
pub fn fixture(dir: &Path, name: &str, n: Option<usize>, file: &str) -> PathBuf {
    let mut args = vec!["fixture", name];
    let size = n.map(|n| n.to_string());
    if let Some(s) = &size {
        args.extend(["--n", s]);
    }
    let run = entropic(dir, &args);
    assert_eq!(run.code, 0, "fixture {name}: {}", run.stderr);
    let path = dir.join(file);
    std::fs::write(&path, run.stdout).unwrap();
    path
}
