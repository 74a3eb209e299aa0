use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace { dir: tempfile::tempdir().unwrap() };
        ws.write("legendre2.op", "p_0: 6\np_1: 0 -2\np_2: 1 0 -1\n");
        ws.write("p2.sig", "breakpoints: -1 1\npoly: -1/2 0 3/2\n");
        ws.write("p2.jumps", "-1: 1 -3\n1: -1 -3\n");
        ws.write("d1.op", "p_1: 1\n");
        ws.write("step.sig", "breakpoints: 0 3/10 1\npoly: 1\npoly: -2\n");
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        fs::write(self.path(name), text).unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_pdmoments")).current_dir(self.dir.path()).args(args).output().unwrap()
    }

    fn stdout(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }
}

fn porcelain_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

#[test]
fn demo_legendre_five() {
    let ws = Workspace::new();
    let out = ws.stdout(&["--porcelain", "demo-legendre", "5"]);
    assert_eq!(porcelain_value(&out, "lambda_cap"), "5");
    assert_eq!(porcelain_value(&out, "exponents"), "{6, -5}");
    assert_eq!(porcelain_value(&out, "vanishing_count"), "5");
    assert_eq!(porcelain_value(&out, "bound"), "5");
    assert_eq!(porcelain_value(&out, "status"), "ok");
}

#[test]
fn general_bound_for_legendre_two() {
    let ws = Workspace::new();
    let out = ws.stdout(&["--porcelain", "bound", "--operator", "legendre2.op", "--p", "0"]);
    assert_eq!(porcelain_value(&out, "general_bound"), "3");
    assert_eq!(porcelain_value(&out, "lambda_cap"), "2");
}

#[test]
fn moments_then_verify() {
    let ws = Workspace::new();
    let m = ws.stdout(&["moments", "--signal", "p2.sig", "--order", "12"]);
    assert!(m.contains("\n4/15\n"));
    ws.write("p2.mom", &m);
    let out = ws.stdout(&["--porcelain", "verify", "--operator", "legendre2.op", "--moments", "p2.mom", "--jumps", "p2.jumps"]);
    assert_eq!(porcelain_value(&out, "status"), "ok");
    let out = ws.stdout(&["--porcelain", "bound", "--operator", "legendre2.op", "--p", "0", "--moments", "p2.mom"]);
    assert_eq!(porcelain_value(&out, "vanishing_count"), "2");
}

#[test]
fn corrupted_moments_fail_verification() {
    let ws = Workspace::new();
    ws.write("bad.mom", "0\n0\n4/15\n0\n8/36\n0\n4/21\n");
    let out = ws.run(&["--porcelain", "verify", "--operator", "legendre2.op", "--moments", "bad.mom", "--jumps", "p2.jumps"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(porcelain_value(&text, "first_failure"), "4");
}

#[test]
fn mgf_check_passes_and_fails() {
    let ws = Workspace::new();
    let m = ws.stdout(&["moments", "--signal", "step.sig", "--order", "20"]);
    ws.write("step.mom", &m);
    ws.write("step.jumps", "0: 1\n3/10: -3\n1: 2\n");
    let out = ws.stdout(&["--porcelain", "mgf-check", "--operator", "d1.op", "--moments", "step.mom", "--jumps", "step.jumps", "--order", "15"]);
    assert_eq!(porcelain_value(&out, "status"), "ok");
    ws.write("wrong.jumps", "0: 1\n3/10: -3\n1: 3\n");
    let out = ws.run(&["mgf-check", "--operator", "d1.op", "--moments", "step.mom", "--jumps", "wrong.jumps", "--order", "15"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_round_trip() {
    let ws = Workspace::new();
    let m = ws.stdout(&["moments", "--signal", "step.sig", "--order", "9"]);
    ws.write("step.mom", &m);
    let jumps = ws.stdout(&["reconstruct", "--operator", "d1.op", "--moments", "step.mom", "--pmax", "1"]);
    ws.write("rec.jumps", &jumps);
    let out = ws.stdout(&["--porcelain", "verify", "--operator", "d1.op", "--moments", "step.mom", "--jumps", "rec.jumps", "--tol", "1e-9"]);
    assert_eq!(porcelain_value(&out, "status"), "ok");

    let out = ws.stdout(&["--porcelain", "reconstruct", "--operator", "d1.op", "--moments", "step.mom", "--pmax", "1", "--grid", "0:1:0.5"]);
    let node: f64 = porcelain_value(&out, "node[1]").parse().unwrap();
    assert!((node - 0.3).abs() < 1e-10);
    let sample = porcelain_value(&out, "sample[1]");
    let value: f64 = sample.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((value + 2.0).abs() < 1e-10);
}

#[test]
fn recurrence_runs_forward() {
    let ws = Workspace::new();
    ws.write("seed.mom", "0\n0\n4/15\n");
    let out = ws.stdout(&["--porcelain", "recurrence", "--operator", "legendre2.op", "--moments", "seed.mom", "--jumps", "p2.jumps", "--order", "6"]);
    assert_eq!(porcelain_value(&out, "lambda_cap"), "2");
    assert_eq!(porcelain_value(&out, "m[4]"), "8/35");
    assert_eq!(porcelain_value(&out, "m[6]"), "4/21");
}

#[test]
fn series_moments_need_operator() {
    let ws = Workspace::new();
    ws.write("exp.sig", "breakpoints: 0 1\nic: 1\n");
    ws.write("exp.op", "p_0: -1\np_1: 1\n");
    assert_eq!(ws.run(&["moments", "--signal", "exp.sig", "--order", "3"]).status.code(), Some(1));
    let out = ws.stdout(&["moments", "--signal", "exp.sig", "--operator", "exp.op", "--order", "1"]);
    let m0: f64 = out.lines().nth(1).unwrap().parse().unwrap();
    assert!((m0 - (std::f64::consts::E - 1.0)).abs() < 1e-13);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    ws.write("garbage.op", "p_0 6\n");
    assert_eq!(ws.run(&["bound", "--operator", "garbage.op", "--p", "0"]).status.code(), Some(1));
    assert_eq!(ws.run(&["bound", "--operator", "missing.op", "--p", "0"]).status.code(), Some(1));
    assert_eq!(ws.run(&["no-such-command"]).status.code(), Some(1));
    // Too few moments is a mathematical precondition, not a parse error.
    ws.write("short.mom", "1\n1/2\n");
    assert_eq!(ws.run(&["reconstruct", "--operator", "d1.op", "--moments", "short.mom", "--pmax", "1"]).status.code(), Some(2));
    assert_eq!(ws.run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let args = ["--porcelain", "demo-legendre", "7"];
    assert_eq!(ws.run(&args).stdout, ws.run(&args).stdout);
}
