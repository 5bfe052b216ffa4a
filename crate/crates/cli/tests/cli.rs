use std::process::{Command, Output};

use serde_json::Value;

fn ckder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckder")).args(args).env_remove("CKDER_MAX_P").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn invalid_primes_exit_2() {
    for p in ["4", "1", "9", "17", "x"] {
        let out = ckder(&["verify", "--p", p]);
        assert_eq!(out.status.code(), Some(2), "p = {p}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_ckder"))
        .args(["dims", "--p", "7"])
        .env("CKDER_MAX_P", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CKDER_MAX_P"));
}

#[test]
fn verify_p5_passes_with_dims() {
    let out = ckder(&["verify", "--p", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "ckder-report/1");
    assert_eq!(r["config"]["field"], "F5");
    assert_eq!(r["dims"]["inder_J_dim"], 40);
    assert_eq!(r["dims"]["der_K_even"], 5);
    assert_eq!(r["dims"]["K_J_dim"], 160);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 27);
    let skipped: Vec<&str> =
        checks.iter().filter(|c| c["status"] == "skipped").map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(skipped, ["dims.mu_minus"]);
}

#[test]
fn verify_p3_reports_the_der_k_discrepancy() {
    let out = ckder(&["verify", "--p", "3", "--checks", "dims", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let der_k = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "dims.der_k").unwrap();
    assert_eq!(der_k["status"], "fail");
    assert_eq!(der_k["witness"]["der_K"], serde_json::json!([3, 4]));
    assert_eq!(r["dims"]["inder_K_odd"], 3);
}

#[test]
fn s4_group_runs_over_f9_at_p3() {
    let out = ckder(&["verify", "--p", "3", "--checks", "s4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("split field F9"));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS") && l.contains("F9")).count(), 4);
    assert!(text.contains("4 passed, 0 failed, 0 skipped"));
}

#[test]
fn dims_table_text() {
    let out = ckder(&["dims", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(48, 48)  total 96"), "{text}");
}

#[test]
fn export_writes_stable_json() {
    let dir = std::env::temp_dir().join(format!("ckder-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (p, name, dims) in [("3", "K", (3, 3)), ("5", "jck_w", (20, 20)), ("3", "so3", (3, 0))] {
        let a = dir.join(format!("{name}-a.json"));
        let b = dir.join(format!("{name}-b.json"));
        for path in [&a, &b] {
            let out = ckder(&["export", "--p", p, "--algebra", name, "--out", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        }
        let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(sa, sb);
        let v: Value = serde_json::from_slice(&sa).unwrap();
        assert_eq!((v["dim_even"].as_u64().unwrap(), v["dim_odd"].as_u64().unwrap()), (dims.0, dims.1), "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn export_failure_exits_1() {
    let out = ckder(&["export", "--p", "3", "--algebra", "K", "--out", "/nonexistent-dir/k.json"]);
    assert_eq!(out.status.code(), Some(1));
}
