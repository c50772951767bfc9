use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toporing")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    v["report"].clone()
}

#[test]
fn wedderburn_of_group_algebra() {
    let r = report(&["wedderburn", &corpus("group-f2-c3.toml")]);
    assert_eq!(r["factors"], serde_json::json!([[2, 1], [4, 1]]));
    assert_eq!(r["reassembly_verified"], true);
}

#[test]
fn adic_tower_is_perfect() {
    let r = report(&["classify-perfect", &corpus("tower-adic2.toml")]);
    assert_eq!(r["verdict"], "PERFECT");
    assert_eq!(r["radical_dims"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(r["quotient"]["verdict"], "SEMISIMPLE");
    let t = report(&["classify-tower", "--depth", "3", "builtin:adic2"]);
    assert_eq!(t["semisimple"]["witness_level"], 1);
}

#[test]
fn verify_passes_with_nonzero_counts() {
    let out = std::env::temp_dir().join(format!("toporing-verify-{}.json", std::process::id()));
    let status = run(&["verify", "--seed", "3", "--out", out.to_str().unwrap()]).status;
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    std::fs::remove_file(&out).ok();
    assert_eq!(v["seed"], 3);
    let suites = v["report"]["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 11);
    for s in suites {
        assert_eq!(s["passed"], true, "{s}");
        assert!(s["count"].as_u64().unwrap() > 0, "{s}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["bridge", "--depth", "6", "--seed", "9", &corpus("family-chain6.toml"), "--refined", &corpus("family-chain7.toml")];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report"]["perfect"]["verdict"], "NOT_PERFECT");
    assert_eq!(v["report"]["coperfect"]["verdict"], "WITNESS");
    assert_eq!(v["report"]["consistent"], true);
}

#[test]
fn every_subcommand_runs_on_the_corpus() {
    let cases: Vec<Vec<String>> = vec![
        vec!["radical".into(), corpus("t2-f2.toml")],
        vec!["decompose-module".into(), corpus("module-t2-regular.toml")],
        vec!["lift-idempotents".into(), corpus("tower-triangular.toml"), "--perturb".into(), "--side".into(), "right".into()],
        vec!["matmul".into(), corpus("windowed-shift.toml"), corpus("windowed-shift.toml")],
        vec!["transport".into(), corpus("module-dual-regular.toml"), "--size".into(), "3".into()],
        vec!["contratensor".into(), corpus("module-t2-regular.toml"), "--size".into(), "4".into()],
        vec!["bass-flat".into(), corpus("dual-numbers-f2.toml"), "--sequence".into(), "0,1".into()],
        vec!["bass-flat".into(), corpus("group-f2-c3.toml"), "--count".into(), "20".into()],
        vec!["split-limit".into(), corpus("system-group.toml")],
        vec!["coperfect".into(), corpus("family-chain6.toml"), "--depth".into(), "6".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        report(&args);
    }
    let r = report(&["radical", &corpus("t2-f2.toml")]);
    assert_eq!((r["radical_dim"].as_u64(), r["oracle_agrees"].as_bool()), (Some(1), Some(true)));
    let r = report(&["bass-flat", &corpus("dual-numbers-f2.toml"), "--sequence", "0,1"]);
    assert_eq!(r["flats"][0]["colimit_dim"], 0);
    let r = report(&["split-limit", &corpus("system-group.toml")]);
    assert_eq!(r["verdict"], "SPLIT");
}

#[test]
fn exit_codes() {
    let bad = std::env::temp_dir().join(format!("toporing-bad-{}.toml", std::process::id()));
    std::fs::write(&bad, "dim = [").unwrap();
    assert_eq!(run(&["radical", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(&bad).ok();
    assert_eq!(run(&["radical", "/no/such/file.toml"]).status.code(), Some(2));
    assert_eq!(run(&["--depth", "0", "radical", "builtin:F4"]).status.code(), Some(2));
    // T_2 has a radical, so it has no Wedderburn decomposition
    let out = run(&["wedderburn", &corpus("t2-f2.toml")]);
    assert_eq!(out.status.code(), Some(3));
    let transcript: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(transcript["error"]["code"], 3);
    assert_eq!(transcript["seed"], 0);
    assert_eq!(toporing::Error::Inconsistent("x".into()).exit_code(), 4);
}
