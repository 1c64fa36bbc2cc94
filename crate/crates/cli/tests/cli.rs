use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunweave"))
        .args(args)
        .current_dir(dir)
        .env("SUNWEAVE_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn table_fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/tables")
        .join(name)
}

#[test]
fn construct_writes_a_verifying_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["construct", "--n", "9", "--seed", "42", "--out", "c.json"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "order 16 suns 20 verified");
    let cert: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(cert["seed"], 42);
    assert_eq!(cert["u"], 7);
    let o = run(dir.path(), &["verify", "c.json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn construct_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.json", "b.json"] {
        let o = run(
            dir.path(),
            &["construct", "--n", "21", "--seed", "5", "--out", out],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn construct_classifies_a_given_sts13() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["cyclic13", "noncyclic13"] {
        let o = run(
            dir.path(),
            &[
                "gen-sts",
                "--n",
                "13",
                "--variant",
                variant,
                "--out",
                "s.json",
            ],
        );
        assert_eq!(o.status.code(), Some(0));
        let o = run(
            dir.path(),
            &["construct", "--sts", "s.json", "--out", "c.json"],
        );
        assert_eq!(o.status.code(), Some(0), "{variant}");
        assert!(stdout(&o).starts_with("order 24 suns 46"));
    }
}

#[test]
fn inadmissible_order_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["construct", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["umin", "--n", "11"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["construct", "--n", "9", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn umin_prints_the_minimum() {
    let dir = tempfile::tempdir().unwrap();
    for (n, u) in [("13", "11"), ("3", "6"), ("19", "9"), ("21", "12")] {
        let o = run(dir.path(), &["umin", "--n", n]);
        assert_eq!(stdout(&o).trim(), u);
    }
}

#[test]
fn verify_reports_missing_edges() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = table_fixture("3ss-16.txt");
    let o = run(dir.path(), &["verify", fixture.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let text = fs::read_to_string(&fixture).unwrap();
    let cut = text.replace(", (10,11,15; 13,9,4)", "");
    assert_ne!(cut, text);
    fs::write(dir.path().join("cut.txt"), cut).unwrap();
    let o = run(dir.path(), &["verify", "cut.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("missing edges: 6"), "{}", stdout(&o));
}

#[test]
fn verify_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"n\": 9,").unwrap();
    let o = run(dir.path(), &["verify", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_flags_a_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["construct", "--n", "13", "--out", "c.json"]);
    let path = dir.path().join("c.json");
    let mut cert: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    cert["u"] = Value::from(10);
    fs::write(&path, cert.to_string()).unwrap();
    let o = run(dir.path(), &["verify", "c.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("u = 10"));
}

#[test]
fn verify_does_not_touch_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = table_fixture("3ss-24-cyclic.txt");
    run(dir.path(), &["verify", fixture.to_str().unwrap()]);
    assert!(!dir.path().join("cache").exists());
}

#[test]
fn gen_emits_fixtures_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "gen",
            "--kind",
            "bull-design",
            "--k",
            "3",
            "--h",
            "5",
            "--seed",
            "9",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let d: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(d["points"], 41);
    assert_eq!(d["seed"], 9);

    let o = run(dir.path(), &["gen-sun", "--m", "16", "--out", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(dir.path(), &["verify", "s.json"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(dir.path(), &["gen", "--kind", "kts", "--n", "21"]);
    let k: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(k["points"], 21);

    let o = run(dir.path(), &["gen", "--kind", "sun"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_small_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sweep", "--max-n", "45"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(str::to_owned).collect();
    assert_eq!(rows.len(), 17);
    assert!(rows.iter().all(|r| r.ends_with("ok")));
    let ns: Vec<u32> = rows
        .iter()
        .map(|r| r.split_whitespace().next().unwrap().parse().unwrap())
        .collect();
    assert!(ns.windows(2).all(|w| w[0] <= w[1]));
}
