use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchroute")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("bad json {e}: {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.path().join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", s(&p)]);
    assert!(run(&all).status.success());
    p
}

fn assert_verifies(graph: &Path, perm: &Path, schedule: &Path) {
    let o = run(&["verify", "--graph", s(graph), "--perm", s(perm), "--schedule", s(schedule)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn emitted_schedules_verify() {
    let dir = TempDir::new().unwrap();
    let tree = gen(&dir, "tree", &["random-tree", "--n", "12", "--seed", "4"]);
    let conn = gen(&dir, "conn", &["random-connected", "--n", "12", "--p", "0.4", "--seed", "4"]);
    let small = gen(&dir, "small", &["random-connected", "--n", "6", "--p", "0.5", "--seed", "2"]);
    let k4 = gen(&dir, "k4", &["complete", "--n", "4"]);
    let perm12 = write(&dir, "p12", "12\n11 10 9 8 7 6 5 4 3 2 1 0\n");
    let perm6 = write(&dir, "p6", "6\n1 2 3 4 5 0\n");
    let swap4 = write(&dir, "swap4", "4\n1 0 2 3\n");
    let out = dir.path().join("sched");

    let cases: Vec<(Vec<&str>, &Path, &Path)> = vec![
        (vec!["route-tree", "--graph", s(&tree), "--perm", s(&perm12)], &tree, &perm12),
        (vec!["route-kappa", "--graph", s(&conn), "--perm", s(&perm12)], &conn, &perm12),
        (vec!["route-hconn", "--graph", s(&conn), "--perm", s(&perm12), "--ports", "0,1,2"], &conn, &perm12),
        (vec!["route-hconn", "--graph", s(&conn), "--perm", s(&perm12), "--ports", "0,1,2", "--pipelined"], &conn, &perm12),
        (vec!["rt-exact", "--graph", s(&small), "--perm", s(&perm6)], &small, &perm6),
        (vec!["rt2", "--graph", s(&k4), "--perm", s(&swap4)], &k4, &swap4),
    ];
    for (mut args, g, p) in cases {
        args.extend_from_slice(&["--schedule-out", s(&out)]);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_verifies(g, p, &out);
    }
}

#[test]
fn seeded_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "g", &["random-connected", "--n", "7", "--p", "0.3", "--seed", "9"]);
    let p = write(&dir, "p", "7\n6 5 4 3 2 1 0\n");
    for args in [
        vec!["gen", "random-connected", "--n", "30", "--seed", "5"],
        vec!["gen", "random-tree", "--n", "30", "--seed", "5"],
        vec!["maxroute", "--graph", s(&g), "--perm", s(&p), "--k", "2", "--mode", "greedy", "--seed", "3"],
        vec!["route-kappa", "--graph", s(&g), "--perm", s(&p)],
        vec!["rt-exact", "--graph", s(&g), "--perm", s(&p)],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(stdout(&a), stdout(&b), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "path", &["path", "--n", "4"]);
    let ends = write(&dir, "ends", "4\n3 1 2 0\n");
    let bad = write(&dir, "bad", "4\n0 0 1 2\n");

    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["rt2", "--graph", s(&path), "--perm", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["rt2", "--graph", s(&path), "--perm", "/nonexistent"]).status.code(), Some(2));

    let no = run(&["rt2", "--graph", s(&path), "--perm", s(&ends)]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["routable_in"], serde_json::Value::Null);

    let rt = run(&["rt-exact", "--graph", s(&path), "--perm", s(&ends)]);
    assert_eq!(rt.status.code(), Some(0));
    assert_eq!(json(&rt)["value"], 3);

    let cube = gen(&dir, "cube", &["hypercube", "--dim", "3"]);
    assert_eq!(run(&["routing-number", "--graph", s(&cube), "--max-states", "10"]).status.code(), Some(3));
}

#[test]
fn reductions_write_their_files() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", "p cnf 3 1\n1 2 -3 0\n");
    let prefix = dir.path().join("sat");
    let o = run(&["reduce-sat", "--cnf", s(&cnf), "--out", s(&prefix)]);
    assert_eq!(o.status.code(), Some(0));
    let vertices = json(&o)["vertices"].clone();
    for ext in ["graph", "perm", "provenance.json"] {
        assert!(dir.path().join(format!("sat.{ext}")).exists(), "{ext}");
    }
    let sched = dir.path().join("s");
    let g = dir.path().join("sat.graph");
    let p = dir.path().join("sat.perm");
    let o = run(&["maxroute", "--graph", s(&g), "--perm", s(&p), "--k", "3", "--schedule-out", s(&sched)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["m"], vertices);
    assert_verifies(&g, &p, &sched);

    let prefix = dir.path().join("cc");
    assert_eq!(run(&["reduce-ccpp", "--cnf", s(&cnf), "--out", s(&prefix)]).status.code(), Some(0));
    let (g, c) = (dir.path().join("cc.graph"), dir.path().join("cc.colors"));
    let yes = run(&["ccpp-solve", "--graph", s(&g), "--colors", s(&c), "--t", "4"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(run(&["ccpp-solve", "--graph", s(&g), "--colors", s(&c), "--t", "3"]).status.code(), Some(1));
}
