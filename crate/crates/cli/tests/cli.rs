use std::path::PathBuf;
use std::process::{Command, Output};

fn dskein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dskein")).args(args).output().expect("binary runs")
}

fn diagram(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", "diagrams", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bracket_prints_normal_forms() {
    let o = dskein(&["bracket", &diagram("trefoil.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(t^7 + t^3 + t^-1 - t^-9) * [ ]");
    let o = dskein(&["bracket", &diagram("unknot.json")]);
    assert_eq!(stdout(&o).trim(), "(-t^2 - t^-2) * [ ]");
    let o = dskein(&["bracket", &diagram("kink.json"), "--ring", "dual"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("dskein-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"genus":1,"crossings":[{"over":"02"}],"edges":[]}"#).unwrap();
    assert_eq!(dskein(&["bracket", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dskein(&["bracket", dir.join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dskein(&["transport", "--word", "a1", "--gen", "1"]).status.code(), Some(2));
    assert_eq!(dskein(&["transport", "--word", "aa", "--gen", "1", "--occ", "3"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn transport_exit_codes() {
    let o = dskein(&["transport", "--word", "aa", "--gen", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = dskein(&["transport", "--word", "b", "--gen", "1", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vacuous"));
    let o = dskein(&["transport", "--word", "abAb", "--gen", "2", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let o = dskein(&["transport", "--word", "abAb", "--gen", "1", "--samples", "3", "--format", "json"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kappa"], -1.0);
    }
}

#[test]
fn selflink_groups() {
    for group in ["q-identities", "hessian", "trace-identity"] {
        let o = dskein(&["selflink", "--suite", group, "--samples", "10"]);
        assert_eq!(o.status.code(), Some(0), "{}", group);
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn zero_samples_warns_and_passes() {
    let o = dskein(&["suite", "transport", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn suite_all_is_deterministic() {
    let a = dskein(&["suite", "all", "--seed", "1", "--format", "json"]);
    let b = dskein(&["suite", "all", "--seed", "1", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
