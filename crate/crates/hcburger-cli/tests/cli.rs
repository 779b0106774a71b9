use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hcburger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcburger")).args(args).output().unwrap()
}

fn manifest(dir: &Path, command: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(format!("{command}.manifest.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn oracle_verify_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hcburger(&["oracle-verify", "--out", out, "--set", "k=3", "--set", "max-len=10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(dir.path().join("oracle_verify.csv")).unwrap();
    assert!(csv.starts_with("check,argument,value,expected,pass\n"));
    assert!(!csv.contains('\r'));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));

    let m = manifest(dir.path(), "oracle-verify");
    assert_eq!(m["command"], "oracle-verify");
    assert_eq!(m["config"]["k"], "3");
    assert_eq!(m["summary"]["pass"], true);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = dir.path().join("hit.cfg");
    fs::write(&cfg, "# small run\nreplicas = 20000\nseed = 4\nell_max = 5\n").unwrap();
    let o = hcburger(&["hitting-law", "--config", cfg.to_str().unwrap(), "--seed", "6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let m = manifest(&out, "hitting-law");
    assert_eq!(m["config"]["replicas"], "20000");
    assert_eq!(m["config"]["seed"], "6");
    assert_eq!(m["seeds"]["seed"], 6);
    let csv = fs::read_to_string(out.join("hitting_law.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "replicas = 100\nwibble = 3\n").unwrap();
    let o = hcburger(&["hitting-law", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("wibble"));

    let o = hcburger(&["exact-eval", "--set", "replicas=3"]);
    assert!(!o.status.success());
}

#[test]
fn same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = hcburger(&["hitting-law", "--replicas", "20000", "--seed", "3", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(out.join("hitting_law.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}
