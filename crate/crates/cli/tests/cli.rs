use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use kzq::report::InvariantsReport;
use kzq_core::catalog::catalog;
use kzq_core::ktheory::GroupK;
use kzq_core::rational::SchurProvider;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kzq-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn kzq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzq")).args(args).output().unwrap()
}

/// Runs with an empty fixture directory, so only the built-in data is used.
fn kzq_core_only(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzq")).args(args).env("KZQ_DATA_DIR", scratch("empty")).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invariants_json() {
    let out = kzq(&["invariants", "name:Q16", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["s"], 1);
    assert_eq!(v["k_minus_1"], serde_json::json!({"rank": 0, "torsion": [2]}));
    assert_eq!(v["r_qp"]["2"], 6);
    assert_eq!(v["agreement"], true);
    assert!(v["image"].is_null());

    let out = kzq(&["invariants", "name:QD32", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k_minus_1"], serde_json::json!({"rank": 0, "torsion": []}));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = ["invariants", "name:S4", "--format", "json", "--seed", "3"];
    let a = stdout(&kzq(&args));
    let b = stdout(&kzq(&args));
    assert_eq!(a, b);
    let parsed: InvariantsReport = serde_json::from_str(&a).unwrap();
    assert_eq!(kzq::report::to_json(&parsed), a.trim_end());
    let seed0 = stdout(&kzq(&["invariants", "name:S4", "--format", "json"]));
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"seed\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&seed0));
}

#[test]
fn golden_text() {
    let out = kzq_core_only(&["invariants", "C1"]);
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with("data")).collect();
    assert_eq!(
        body,
        [
            "group               C1",
            "order               1",
            "r_Q                 1",
            "carter rank         0",
            "s                   0",
            "K_-1                0",
            "K_-1 via SC         0",
            "agreement           true",
            "reduced K_0 Q rank  0",
            "SC rank             0",
            "seed                0",
        ]
    );
}

#[test]
fn amalgams() {
    let headline = [
        "amalgam", "--h", "name:Q16", "--k1", "name:QD32", "--embed1", "r=a^2;s=a*b", "--k2", "name:QD32", "--embed2",
        "r=a^2;s=a*b", "--format", "json",
    ];
    let v: serde_json::Value = serde_json::from_str(&stdout(&kzq(&headline))).unwrap();
    assert_eq!(v["image"], serde_json::json!({"rank": 0, "torsion": [2]}));
    assert_eq!(v["embed1"], "r=a^2;s=a*b");
    assert_eq!(v["agreement"], true);
    let dinf = kzq(&["amalgam", "--h", "name:C1", "--k1", "name:C2", "--k2", "name:C2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&dinf)).unwrap();
    assert_eq!(v["image"], serde_json::json!({"rank": 0, "torsion": []}));
}

#[test]
fn vc1() {
    for (h, aut, rank) in [("name:C1", "", 1), ("name:C3", "a=a^-1", 2), ("name:Q16", "r=r;s=s", 6)] {
        let out = kzq(&["vc1", "--h", h, "--aut", aut, "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["k0q"]["rank"], rank, "{h}");
        assert_eq!(v["image"], serde_json::json!({"rank": 0, "torsion": []}));
    }
}

#[test]
fn exit_codes() {
    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(code(kzq(&["invariants", "name:Nope"])), 2);
    assert_eq!(code(kzq(&["invariants", "pres:a;a^"])), 2);
    let bad_embed = kzq(&[
        "amalgam", "--h", "name:Q16", "--k1", "name:QD32", "--embed1", "r=a^2;s=a*", "--k2", "name:QD32", "--embed2",
        "r=a^2;s=a*b",
    ]);
    assert!(String::from_utf8_lossy(&bad_embed.stderr).contains("position"));
    assert_eq!(code(bad_embed), 2);
    assert_eq!(code(kzq_core_only(&["invariants", "SG(32,44)"])), 3);
    assert_eq!(code(kzq(&["amalgam", "--h", "C1", "--k1", "C4", "--k2", "C2"])), 5);
    assert_eq!(code(kzq(&["vc1", "--h", "C4", "--aut", "a=a^2"])), 7);

    let p = SchurProvider::core();
    let k = GroupK::new(Arc::new(catalog("Q16").unwrap()), &p).unwrap();
    let faithful = k.irrs().iter().find(|i| i.schur.m_infinity == 2).unwrap();
    let file = scratch("conflict").join("conflict.schur");
    let line = format!("schur group={} irr={} p=inf m=1\n", k.data.group_fingerprint(), faithful.fingerprint);
    std::fs::write(&file, line).unwrap();
    assert_eq!(code(kzq(&["invariants", "Q16", "--schur-data", file.to_str().unwrap()])), 4);
}

#[test]
fn corpus_without_fixture_skips() {
    let out = kzq_core_only(&["corpus", "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 10);
    for r in results {
        let expect = if r["id"] == 8 { "SKIP" } else { "PASS" };
        assert_eq!(r["status"], expect, "{r}");
    }
    assert!(v["summary"].as_str().unwrap().starts_with("PASS 100%"));
}
