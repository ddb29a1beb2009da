use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn guard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_guard")).args(args).output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let svg = dir.path().join("r.svg");
    let o = guard(&[
        "run",
        "--mode",
        "boundary",
        "--input",
        s(&fixture("notch.poly")),
        "--output",
        s(&out),
        "--svg",
        s(&svg),
        "--layer",
        "windows,visibility",
        "--with-opt",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(&out).unwrap();
    assert!(report.starts_with("guard-report v1\n"));
    assert!(report.contains("\nopt 2\n"));
    assert!(report.ends_with("covered true\n"));
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.contains("class=\"window\""));
    assert!(svg.contains("class=\"visibility\""));
}

#[test]
fn run_is_deterministic() {
    let a = guard(&["run", "--mode", "interior", "--input", s(&fixture("spiral12.poly"))]);
    let b = guard(&["run", "--mode", "interior", "--input", s(&fixture("spiral12.poly"))]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pruned_run_stays_covered() {
    let o = guard(&[
        "run",
        "--mode",
        "vertices",
        "--input",
        s(&fixture("spiral12.poly")),
        "--redundancy-prune",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("covered true"));
}

#[test]
fn partition_prints_levels() {
    let o = guard(&["partition", "--input", s(&fixture("five_levels.poly"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("levels 1 2 3 2 3"));
    assert_eq!(text.lines().filter(|l| l.starts_with("window ")).count(), 11);
}

#[test]
fn gen_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("g.poly");
    let o = guard(&[
        "gen",
        "--n",
        "12",
        "--seed",
        "7",
        "--style",
        "spiral",
        "--out",
        s(&poly),
    ]);
    assert_eq!(o.status.code(), Some(0));

    let report = dir.path().join("r.txt");
    let o = guard(&["run", "--mode", "boundary", "--input", s(&poly), "--output", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let o = guard(&[
        "verify",
        "--input",
        s(&poly),
        "--guards",
        s(&report),
        "--mode",
        "boundary",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "covered\n");

    let list = dir.path().join("g.txt");
    fs::write(&list, "0\n").unwrap();
    let o = guard(&[
        "verify",
        "--input",
        s(&poly),
        "--guards",
        s(&list),
        "--mode",
        "vertices",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("uncovered "));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poly");
    fs::write(&bad, "3\n0 0\n1 1\n2 2\n").unwrap();
    assert_eq!(
        guard(&["run", "--mode", "vertices", "--input", s(&bad)]).status.code(),
        Some(2)
    );
    assert_eq!(
        guard(&["run", "--mode", "nope", "--input", s(&bad)]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.poly");
    assert_eq!(guard(&["partition", "--input", s(&missing)]).status.code(), Some(2));
    let list = dir.path().join("g.txt");
    fs::write(&list, "99").unwrap();
    let o = guard(&[
        "verify",
        "--input",
        s(&fixture("notch.poly")),
        "--guards",
        s(&list),
        "--mode",
        "vertices",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn proptest_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 5\ncount = 4\nmin_n = 6\nmax_n = 9\n").unwrap();
    let o = guard(&["proptest", "--corpus-config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    fs::write(&cfg, "count = 4\nbogus = 1\n").unwrap();
    assert_eq!(guard(&["proptest", "--corpus-config", s(&cfg)]).status.code(), Some(2));
}
