use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_induced-embed"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    cli().args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run(&["gen", "gnp", "--n", "200", "--d", "6", "--seed", "3"], tmp.path());
    let b = run(&["gen", "gnp", "--n", "200", "--d", "6", "--seed", "3"], tmp.path());
    let c = run(&["gen", "gnp", "--n", "200", "--d", "6", "--seed", "4"], tmp.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_zero_probability_is_edgeless() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["gen", "gnp", "--n", "10", "--p", "0/1"], tmp.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("10 0"));
}

#[test]
fn gen_counterexample_to_file() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(
        &["gen", "counterexample", "chord-cycle-pendants", "--len", "6", "--d", "4", "--out", "c.edges"],
        tmp.path(),
    );
    assert!(o.status.success());
    let text = fs::read_to_string(tmp.path().join("c.edges")).unwrap();
    assert!(text.starts_with("30 "));
}

#[test]
fn single_node_tree_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("p.edges"), "4 3\n0 1\n1 2\n2 3\n").unwrap();
    let o = run(&["embed", "--graph", "p.edges", "--nodes", "1", "--trials", "1", "--adversary", "dfs"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["aggregate"]["successes"], 1);
}

#[test]
fn paper_mode_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["embed", "--gnp", "300,10", "--mode", "paper", "--trials", "1", "--nodes", "5"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("refused"));
}

#[test]
fn bad_configs_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.toml"), "bogus = 1\n").unwrap();
    let o = run(&["embed", "--config", "bad.toml", "--gnp", "100,5"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["embed", "--gnp", "100,5", "--threshold", "quantile:2"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["embed", "--no-such-flag"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_names_the_offending_pair() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path();
    fs::write(p.join("p.edges"), "4 3\n0 1\n1 2\n2 3\n").unwrap();
    fs::write(p.join("ok.json"), r#"{"nodes":[[0,0],[1,1],[2,2]],"edges":[[0,1],[1,2]],"certificate":null}"#).unwrap();
    fs::write(p.join("bad.json"), r#"{"nodes":[[0,0],[1,1],[2,3]],"edges":[[0,1],[1,2]],"certificate":null}"#).unwrap();
    let o = run(&["verify", "--graph", "p.edges", "--embedding", "ok.json"], p);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--graph", "p.edges", "--embedding", "bad.json"], p);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o) + &stderr(&o);
    assert!(text.contains("nodes 1 and 2 (vertices 1 and 3)"), "{text}");
}

#[test]
fn saved_config_reproduces_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path();
    let args = ["embed", "--gnp", "3000,48", "--nodes", "12", "--trials", "2", "--adversary", "bfs", "--out", "r1"];
    let o = run(&args, p);
    assert!(matches!(o.status.code(), Some(0 | 2)), "{}", stderr(&o));
    let config = fs::read_to_string(p.join("r1/config.toml")).unwrap();
    assert!(!config.contains("out ="));
    let o = run(&["embed", "--config", "r1/config.toml", "--out", "r2"], p);
    assert!(matches!(o.status.code(), Some(0 | 2)), "{}", stderr(&o));
    assert_eq!(
        fs::read(p.join("r1/report.json")).unwrap(),
        fs::read(p.join("r2/report.json")).unwrap()
    );
    let o = run(&["verify", "--dir", "."], p);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
}
