use std::process::Command;

use modcat::bundle::DataBundle;

fn modcat(args: &[&str], cache: &std::path::Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modcat"))
        .args(args)
        .env("MODCAT_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn data_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = modcat(&["data", "B", "2", "4", "--format", "table"], dir.path());
    assert_eq!(code, 0);
    let rows = out.lines().filter(|l| !l.starts_with('#') && !l.trim_start().starts_with("index")).count();
    assert_eq!(rows, 15);
    let (code, out, _) = modcat(&["data", "A", "1", "1", "--format", "table"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#') && !l.trim_start().starts_with("index")).count(), 2);
}

#[test]
fn bundle_cache_roundtrip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    let (code, _, _) = modcat(&["data", "A", "3", "4", "--out", first.to_str().unwrap()], &cache);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    // second run is served from the cache
    let (code, _, _) = modcat(&["data", "A", "3", "4", "--out", second.to_str().unwrap()], &cache);
    assert_eq!(code, 0);
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());
    let b = DataBundle::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(b.rank(), 35);
    b.verify().unwrap();
    // a fresh computation without a cache gives the same bytes
    let fresh = tempfile::tempdir().unwrap();
    let third = dir.path().join("c.json");
    let (code, _, _) = modcat(
        &["data", "A", "3", "4", "--cache-dir", fresh.path().to_str().unwrap(), "--out", third.to_str().unwrap()],
        &cache,
    );
    assert_eq!(code, 0);
    assert_eq!(a, std::fs::read(&third).unwrap());
}

#[test]
fn local_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = modcat(&["local", "A", "3", "4", "--format", "table"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("rank 14"), "{out}");
    let (code, out, _) = modcat(&["local", "B", "2", "2", "--format", "table"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("rank 5") && out.contains("pointed part rank 5"), "{out}");
    let (code, _, _) = modcat(&["local", "B", "2", "3"], dir.path());
    assert_eq!(code, 4);
    let (code, _, _) = modcat(&["data", "A", "3", "4", "--format", "yaml"], dir.path());
    assert_eq!(code, 2);
    let (code, _, _) = modcat(&["data", "E", "8", "30", "--max-alcove", "1000"], dir.path());
    assert_eq!(code, 3);
}

#[test]
fn verify_subsets() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = modcat(&["verify", "thm1", "--range", "E6:k<6", "--format", "table"], dir.path());
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = modcat(&["verify", "thm1", "--range", "B,C,D,subcat", "--format", "table"], dir.path());
    assert_eq!(code, 0, "{out}");
    // the g2 charge window, as stated, fails below ℓ = 25
    let (code, _, err) = modcat(&["verify", "witt"], dir.path());
    assert_eq!(code, 1);
    let failed: Vec<&str> = err.lines().filter(|l| l.starts_with("failed:")).collect();
    assert_eq!(failed.len(), 1, "{err}");
    assert!(failed[0].contains("g2"));
}

#[test]
fn fingerprints() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = modcat(&["fingerprint", "B", "2", "8", "--local"], dir.path());
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 20);
    let (code, out, _) = modcat(&["fusion", "G", "2", "3", "--a", "2,0", "--b", "2,0"], dir.path());
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let twice = v["product"].as_array().unwrap().iter().any(|e| e[0] == serde_json::json!([2, 0]) && e[1] == 2);
    assert!(twice, "{out}");
}
