use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfl"))
        .args(args)
        .env_remove("SFL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = sfl(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn dims_on_example3() {
    let dir = tempfile::tempdir().unwrap();
    let e3 = gen(dir.path(), "e3.json", &["example3"]);
    let o = sfl(&["dims", "--instance", e3.to_str().unwrap(), "--gamma", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["SL=1", "SL_2=0", "SL_3=1", "MS_{1/3}=1", "Helly=3"] {
        assert!(
            text.lines().any(|l| l == line),
            "{line} missing from {text}"
        );
    }
    let o = sfl(&[
        "dims",
        "--instance",
        e3.to_str().unwrap(),
        "--sl",
        "--witness",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["dimension"], "SL");
    assert!(v[0]["witness"].is_object());
}

#[test]
fn hamming_helly() {
    let dir = tempfile::tempdir().unwrap();
    let h = gen(dir.path(), "h.json", &["hamming", "--K", "3", "--q", "1"]);
    let o = sfl(&["dims", "--instance", h.to_str().unwrap(), "--helly"]);
    let text = stdout(&o);
    let value: usize = text.trim().strip_prefix("Helly=").unwrap().parse().unwrap();
    assert!((4..=5).contains(&value));
}

#[test]
fn play_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let e3 = gen(dir.path(), "e3.json", &["example3"]);
    let stream = dir.path().join("s.json");
    std::fs::write(&stream, "[[0, 0], [0, 1], [0, 2]]").unwrap();
    let out = dir.path().join("t.csv");
    let o = sfl(&[
        "play",
        "--instance",
        e3.to_str().unwrap(),
        "--learner",
        "example3",
        "--adversary",
        "scripted",
        "--stream",
        stream.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("round,instance,prediction,set,sampled_loss,expected_loss_num"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cs = gen(dir.path(), "cs.json", &["cosingleton", "--M", "4"]);
    let args = [
        "play",
        "--instance",
        cs.to_str().unwrap(),
        "--learner",
        "uniform",
        "--adversary",
        "iid",
        "--rounds",
        "20",
        "--mode",
        "sample",
        "--seed",
        "42",
    ];
    let a = sfl(&args);
    let b = sfl(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let via_env = Command::new(env!("CARGO_BIN_EXE_sfl"))
        .args(&args[..args.len() - 2])
        .env("SFL_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, via_env.stdout);

    let bench = [
        "bench",
        "--instance",
        cs.to_str().unwrap(),
        "--learner",
        "soa",
        "--adversary",
        "separation",
        "--rounds",
        "3",
        "--trials",
        "5",
    ];
    let s = sfl(&bench);
    assert!(s.status.success());
    let v: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(v["trials"], 5);
    assert_eq!(v["mean_regret"], 3.0);
}

#[test]
fn verify_exit_codes() {
    let o = sfl(&["verify", "minimax", "--max-size", "tiny"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite minimax:"));
    let o = sfl(&["verify", "helly", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_ok());
    assert_eq!(sfl(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let e3 = gen(dir.path(), "e3.json", &["example3"]);
    let e3 = e3.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["dims", "--instance", e3, "--bogus"],
        vec!["dims", "--instance", e3, "--gamma", "0.3"],
        vec!["dims", "--instance", "/nonexistent.json"],
        vec!["play", "--instance", e3, "--learner", "rsoa"],
        vec![
            "play",
            "--instance",
            e3,
            "--learner",
            "soa",
            "--scales",
            "2",
        ],
        vec!["play", "--instance", e3, "--adversary", "scripted"],
        vec!["gen", "hamming", "--K", "3"],
        vec!["gen", "ranking", "--K", "9"],
        vec!["gen", "interval", "--G", "4", "--M", "3"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(sfl(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["gen", "dims", "play", "bench", "verify"] {
        let o = sfl(&[sub, "--help"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("Usage"));
    }
}
