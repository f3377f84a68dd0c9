use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn madcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_madcc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = madcc(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_builtin_design() {
    assert_eq!(ok(&["design", "verify", "fano", "--t", "2"]), "2-(7,3,1)\n");
    assert_eq!(ok(&["design", "verify", "ag9"]), "2-(9,3,1)\nresolvable r=4\nCRD mu2=1\n");
    let o = madcc(&["design", "verify", "fano", "--t", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let oa = dir.path().join("oa.txt");
    ok(&["design", "gen-proper-oa", "--q", "3", "--m", "3", "--out", path(&oa)]);
    assert_eq!(fs::read_to_string(&oa).unwrap().lines().count(), 10);
    assert!(ok(&["design", "verify", path(&oa)]).contains("strength=2 index=1"));

    let dual = dir.path().join("dual.dsg");
    ok(&["design", "dual", "fano", "--out", path(&dual)]);
    assert_eq!(ok(&["design", "verify", path(&dual)]), "2-(7,3,1)\n");

    let gdd = dir.path().join("g.gdd");
    ok(&["design", "gen-trivial-gdd", "--m", "3", "--q", "3", "--t", "2", "--out", path(&gdd)]);
    assert_eq!(ok(&["design", "verify", path(&gdd)]), "2-GDD m=3 q=3 k=2 lambda=1\n");

    let text = ok(&["design", "gen-complete", "--n", "4", "--k", "2"]);
    assert_eq!(text.lines().count(), 7);
    let code = ok(&["design", "from-code", "--q", "3", "--column", "1,0", "--column", "0,1", "--column", "1,1", "--column", "1,2"]);
    assert_eq!(code.lines().filter(|l| l.starts_with("class:")).count(), 4);
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.dsg");
    fs::write(&f, "design v=3\nblock: 1 2\nblock: 1 9\n").unwrap();
    let o = madcc(&["design", "verify", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn broken_array_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.pda");
    fs::write(&f, "pda F=2 K=2\n* s1\ns1 s1\n").unwrap();
    let o = madcc(&["design", "verify", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violation"));
    fs::write(&f, "pda F=2 K=2\n* s1\ns1 *\n").unwrap();
    assert_eq!(ok(&["design", "verify", path(&f)]), "(2,2,1,1) PDA 2-regular\nno sender map\n");
}

#[test]
fn scheme_metrics_lines() {
    assert_eq!(ok(&["scheme", "tdesign", "--design", "fano", "--i", "1"]), "K=7 F=21 Z=9 S=42 R=2/1\n");
    assert_eq!(ok(&["scheme", "oa-users", "--m", "3", "--q", "2", "--t", "2"]), "K=4 F=12 Z=9 S=4 R=1/3\n");
    let line = ok(&["scheme", "complete", "--n", "8", "--k", "3", "--family", "j", "--idx", "2"]);
    assert!(line.contains("F=280") && line.ends_with("R=1/1\n"), "{line}");
    assert_eq!(ok(&["scheme", "tgdd", "--m", "3", "--q", "3", "--t", "2"]), "K=27 F=18 Z=10 S=72 R=4/1\n");
    assert_eq!(ok(&["scheme", "tdesign-wide", "--design", "design-2-6-3-2", "--i", "2"]), "K=10 F=45 Z=36 S=30 R=2/3\n");
    let o = madcc(&["scheme", "tdesign", "--design", "fano"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn four_user_simulation() {
    let out = ok(&["simulate", "four-user", "--demand", "4,2,1,3"]);
    assert!(out.contains("demand=4,2,1,3\n"));
    assert!(out.contains("R=1/1\n"));
    assert!(out.ends_with("decode=ok\n"));
}

#[test]
fn simulation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("tg");
    ok(&["scheme", "tgdd", "--m", "3", "--q", "3", "--t", "2", "--out", path(&b)]);
    let args = ["simulate", path(&b), "--demand", "random", "--seed", "9", "--transmissions"];
    let first = ok(&args);
    assert!(first.contains("transmissions=72\n"));
    assert_eq!(first, ok(&args));
    assert_ne!(first, ok(&["simulate", path(&b), "--demand", "random", "--seed", "10", "--transmissions"]));
}

#[test]
fn corrupted_bundle_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("fano");
    ok(&["scheme", "tdesign", "--design", "fano", "--i", "1", "--out", path(&b)]);
    ok(&["simulate", path(&b)]);
    let pda = b.join("delivery.pda");
    let text = fs::read_to_string(&pda).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // give the second label of the first row the name of the first
    let mut toks: Vec<String> = lines[1].split_whitespace().map(String::from).collect();
    let labels: Vec<usize> = (0..toks.len()).filter(|&i| toks[i] != "*").collect();
    toks[labels[1]] = toks[labels[0]].clone();
    lines[1] = toks.join(" ");
    fs::write(&pda, lines.join("\n") + "\n").unwrap();
    let o = madcc(&["simulate", path(&b)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("decode"));
}

#[test]
fn compare_tables() {
    let out = ok(&["compare", "tgdd", "--m", "3", "--q", "3", "--t", "2", "--r", "2", "--csv"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains(",540\n"));
    let out = ok(&["compare", "complete", "--n", "8", "--k", "3", "--check", "--jobs", "2"]);
    assert_eq!(out.lines().filter(|l| l.ends_with(": PASS")).count(), 4);
    let out = ok(&["compare", "tdesign", "--design", "fano", "--r", "3", "--check"]);
    assert!(out.contains("check proposed t-design: PASS"));
    let out = ok(&["compare", "summary", "--m", "3", "--q", "2", "--t", "2", "--check"]);
    assert_eq!(out.lines().filter(|l| l.ends_with(": PASS")).count(), 2);
    assert_eq!(madcc(&["compare", "summary"]).status.code(), Some(1));
}

#[test]
fn memory_share_csv() {
    let out = ok(&["compare", "memory-share", "--n-files", "4", "--k", "4", "--points", "2:1"]);
    assert_eq!(out, "M,R\n0/1,4/1\n1/1,5/2\n2/1,1/1\n3/1,1/2\n4/1,0/1\n");
    let out = ok(&["compare", "memory-share", "--n-files", "30", "--k", "10", "--design", "steiner-3-10-4", "--subpacketization"]);
    assert_eq!(out, "M,F\n12/1,60\n20/1,180\n12/1,60\n20/1,270\n");
    assert_eq!(madcc(&["compare", "memory-share", "--n-files", "4", "--k", "4", "--points", "x"]).status.code(), Some(1));
}

#[test]
fn usage_exit_codes() {
    assert_eq!(madcc(&["--help"]).status.code(), Some(0));
    assert_eq!(madcc(&["--version"]).status.code(), Some(0));
    assert_eq!(madcc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(madcc(&["scheme", "nonsense"]).status.code(), Some(1));
}
