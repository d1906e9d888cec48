//! Golden-file and exit-code tests for the `jtype` binary.
//!
//! Set `JTYPE_BLESS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn jtype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtype"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn golden(name: &str, args: &[&str]) {
    let o = jtype(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let got = stdout(&o);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("JTYPE_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(got, want, "output differs from {name}");
}

#[test]
fn qpoly_constant_term() {
    let o = jtype(&["qpoly", "--config", "configs/gapped.json", "--n", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], serde_json::json!([v["lambda"]]));
    assert_eq!(v["property"], "determinantal construction");
}

#[test]
fn qpoly_golden() {
    golden("qpoly_gapped_5.json", &["qpoly", "--config", "configs/gapped.json", "--n", "5"]);
}

#[test]
fn orth_check_golden() {
    golden("orth_gapped_12.txt", &["orth-check", "--config", "configs/gapped.json", "--max-n", "12", "--text"]);
    golden(
        "orth_sobolev_12.txt",
        &["orth-check", "--config", "configs/integer_sobolev.json", "--max-n", "12", "--text"],
    );
}

#[test]
fn recurrence_golden() {
    golden(
        "recurrence_gapped.json",
        &["recurrence", "--config", "configs/gapped.json", "--q", "0,-52/5,-2,52/15,1", "--window", "5:25"],
    );
}

#[test]
fn algebra_scan_golden() {
    golden(
        "scan_integer_sobolev.json",
        &["algebra-scan", "--config", "configs/integer_sobolev.json", "--max-deg", "3", "--window", "5:30"],
    );
}

#[test]
fn krall_golden() {
    golden("krall_1_1.txt", &["krall", "--config", "configs/krall_1_1.json", "--text"]);
}

#[test]
fn output_is_deterministic_and_out_matches_stdout() {
    let args = ["algebra-scan", "--config", "configs/gapped.json", "--max-deg", "4"];
    let a = stdout(&jtype(&args));
    assert_eq!(a, stdout(&jtype(&args)));
    let dir = std::env::temp_dir().join(format!("jtype-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("scan.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", file.to_str().unwrap()]);
    let o = jtype(&with_out);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), a);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn corrupted_coefficient_is_reported() {
    let o = jtype(&[
        "orth-check", "--config", "configs/gapped.json", "--max-n", "8", "--inject-fault", "6:1:1/5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    let first = &v["violations"][0];
    assert_eq!((first["n"].as_u64(), first["i"].as_u64()), (Some(6), Some(0)));
}

#[test]
fn malformed_config_exits_1() {
    let dir = std::env::temp_dir().join(format!("jtype-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"family\": ").unwrap();
    let o = jtype(&["qpoly", "--config", bad.to_str().unwrap(), "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid configuration"));
    std::fs::write(&bad, r#"{"alpha": "1/2", "beta": "1/3", "G": [1], "H": [1], "R": {"1": ["1", "2"]}, "S": {}}"#)
        .unwrap();
    assert_eq!(jtype(&["qpoly", "--config", bad.to_str().unwrap(), "--n", "1"]).status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sobolev_mode_needs_integer_parameters() {
    let o = jtype(&["orth-check", "--config", "configs/gapped.json", "--max-n", "4", "--mode", "sobolev"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degenerate_family_exits_2() {
    let dir = std::env::temp_dir().join(format!("jtype-degen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("degenerate.json");
    // R_1 = S_1 = theta vanish at theta_0 = 0, so Lambda(1) = 0.
    std::fs::write(&cfg, r#"{"alpha": "1/2", "beta": "1/3", "G": [1], "H": [1], "R": {"1": ["0", "1"]}, "S": {"1": ["0", "1"]}}"#)
        .unwrap();
    let o = jtype(&["qpoly", "--config", cfg.to_str().unwrap(), "--n", "1"]);
    std::fs::remove_dir_all(dir).unwrap();
    assert_eq!(o.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}
