//! Exit-code and artifact contract of the binary: 0 success, 2 rejected
//! request, 3 numerical failure, 4 i/o failure; every run leaves a manifest
//! naming each artifact with the command and configuration hash.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().unwrap();
    (out.status.code(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn tmp(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn success_writes_artifacts_and_manifest() {
    let out = tmp("levelset-ok");
    let _ = std::fs::remove_dir_all(&out);
    let (code, _) = run(&["levelset", "--out", out.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    for f in ["levelset.csv", "levelset.json", "levelset.svg", "manifest.json"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert_eq!(e["command"], "levelset");
        assert_eq!(e["config_hash"].as_str().unwrap().len(), 64);
        assert!(e["version"].as_str().is_some());
    }
}

#[test]
fn rejected_requests_exit_2() {
    let out = tmp("rejected");
    let out = out.to_str().unwrap();
    // Exponent outside (0, 1).
    let (code, err) = run(&["levelset", "--out", out, "--p", "1.5"]);
    assert_eq!(code, Some(2), "stderr: {err}");
    // Level above the critical value.
    let cfg = tmp("bad-level.ini");
    std::fs::write(&cfg, "[levelset]\nc = 0.9\n").unwrap();
    let (code, err) = run(&["levelset", "--out", out, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, Some(2), "stderr: {err}");
    assert!(err.contains("invalid request"), "stderr: {err}");
    // Seed on a rest point.
    let cfg = tmp("rest-point.ini");
    std::fs::write(&cfg, "[homoclinic]\nalpha = 0.25\nbeta = 0.0\n").unwrap();
    let (code, err) = run(&["homoclinic", "--out", out, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, Some(2), "stderr: {err}");
    // Malformed config file.
    let cfg = tmp("broken.ini");
    std::fs::write(&cfg, "[unterminated\n").unwrap();
    let (code, _) = run(&["periodic", "--out", out, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, Some(2));
}

#[test]
fn io_failures_exit_4() {
    // The output path collides with an existing file.
    let block = tmp("not-a-dir");
    std::fs::write(&block, "x").unwrap();
    let nested = block.join("out");
    let (code, err) = run(&["levelset", "--out", nested.to_str().unwrap()]);
    assert_eq!(code, Some(4), "stderr: {err}");
    // Config file that does not exist.
    let (code, _) = run(&[
        "levelset",
        "--out",
        tmp("unused").to_str().unwrap(),
        "--config",
        tmp("missing.ini").to_str().unwrap(),
    ]);
    assert_eq!(code, Some(4));
}

#[test]
fn flags_override_config_sections() {
    // The config pins n = 9 points and p = 0.4; the flag moves p back to
    // 0.5, which must change the reported constants and the hash.
    let cfg = tmp("override.ini");
    std::fs::write(&cfg, "[levelset]\np = 0.4\nn = 9\nc = 0.001\n").unwrap();
    let out_a = tmp("override-a");
    let out_b = tmp("override-b");
    let (code, _) =
        run(&["levelset", "--out", out_a.to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let (code, _) = run(&[
        "levelset",
        "--out",
        out_b.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--p",
        "0.5",
    ]);
    assert_eq!(code, Some(0));

    let read = |dir: &Path, f: &str| -> serde_json::Value {
        serde_json::from_slice(&std::fs::read(dir.join(f)).unwrap()).unwrap()
    };
    assert_eq!(read(&out_a, "levelset.json")["p"], 0.4);
    assert_eq!(read(&out_b, "levelset.json")["p"], 0.5);
    assert_ne!(
        read(&out_a, "manifest.json")["entries"][0]["config_hash"],
        read(&out_b, "manifest.json")["entries"][0]["config_hash"]
    );
}
