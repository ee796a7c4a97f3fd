use std::path::Path;
use std::process::{Command, Output};

fn spc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spc"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPC_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .parse()
        .unwrap()
}

#[test]
fn simulate_cluster_select_eval() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = spc(&["simulate", "--scenario", "3", "--seed", "7"], d);
    assert!(o.status.success(), "{o:?}");
    let o = spc(&["cluster", "data.csv", "--omega", "0.5"], d);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("selected solution"));
    let o = spc(&["select", "path.json"], d);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(value(&stdout(&o), "k_clust"), 10.0);
    let o = spc(&["eval", "assignment.csv", "truth.csv"], d);
    assert!(o.status.success(), "{o:?}");
    let report = stdout(&o);
    assert!(value(&report, "ari_c") >= 0.95);
    assert!(value(&report, "ari_n") >= 0.95);
}

#[test]
fn cluster_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(spc(&["simulate", "--n", "60", "--p", "3", "--k", "3", "--noise", "5"], d).status.success());
    assert!(spc(&["cluster", "data.csv", "--omega", "0.5", "--out", "a.json"], d).status.success());
    assert!(spc(&["cluster", "data.csv", "--omega", "0.5", "--out", "b.json"], d).status.success());
    let a = std::fs::read(d.join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.json")).unwrap());
    assert!(!String::from_utf8(a).unwrap().contains("elapsed_seconds"));
}

#[test]
fn seed_variable_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::create_dir(d.join("flag")).unwrap();
    std::fs::create_dir(d.join("env")).unwrap();
    assert!(spc(&["simulate", "--seed", "11", "--out-dir", "flag"], d).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_spc"))
        .args(["simulate", "--seed", "3", "--out-dir", "env"])
        .current_dir(d)
        .env("SPC_SEED", "11")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(
        std::fs::read(d.join("flag/data.csv")).unwrap(),
        std::fs::read(d.join("env/data.csv")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("ok.csv"), "0,0\n1,1\n5,5\n").unwrap();
    std::fs::write(d.join("ragged.csv"), "0,0\n1\n").unwrap();
    std::fs::write(d.join("text.csv"), "0,0\n1,abc\n").unwrap();

    assert_eq!(spc(&["--version"], d).status.code(), Some(0));
    assert_eq!(spc(&["cluster", "ok.csv"], d).status.code(), Some(1));
    assert_eq!(spc(&["cluster", "ok.csv", "--omega", "1.5"], d).status.code(), Some(1));
    assert_eq!(spc(&["cluster", "missing.csv", "--omega", "0.5"], d).status.code(), Some(2));

    let o = spc(&["cluster", "ragged.csv", "--omega", "0.5"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = spc(&["cluster", "text.csv", "--omega", "0.5"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'abc'"));
}

#[test]
fn select_rejects_unknown_schema() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("data.csv"), "0\n0.1\n0.3\n5\n5.2\n5.1\n").unwrap();
    assert!(spc(&["cluster", "data.csv", "--omega", "0.5"], d).status.success());
    let text = std::fs::read_to_string(d.join("path.json")).unwrap();
    std::fs::write(d.join("future.json"), text.replace("\"schema_version\": \"1.0\"", "\"schema_version\": \"2.0\"")).unwrap();
    let o = spc(&["select", "future.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2.0"));
}
