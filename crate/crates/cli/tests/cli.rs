//! End-to-end tests of the command-line surface: file formats, exit codes,
//! and the reproduction commands.

use std::path::PathBuf;
use std::process::{Command, Output};

fn nvee(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvee"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

struct Tmp(PathBuf);

impl Tmp {
    fn new(tag: &str) -> Tmp {
        let dir = std::env::temp_dir().join(format!("nvee-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Tmp(dir)
    }
}

impl Drop for Tmp {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn validate_accepts_and_rejects() {
    let tmp = Tmp::new("validate");
    let vee = write(&tmp.0, "vee.json", r#"{"branches":[1,2,3],"weight":[1,1]}"#);
    let out = nvee(&["validate", vee.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("branch lengths [1, 2, 3]"));
    assert!(text.contains("asymmetric: true"));

    let diamond = write(
        &tmp.0,
        "diamond.json",
        r#"{"elements":4,"covers":[[0,1],[0,2],[1,3],[2,3]]}"#,
    );
    let out = nvee(&["validate", diamond.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("condition (2)"));
}

#[test]
fn sigma_lists_convex_supports() {
    let tmp = Tmp::new("sigma");
    // The six-element poset with two incomparable middle chains.
    let f = write(
        &tmp.0,
        "f.json",
        r#"{"elements":6,"covers":[[0,1],[0,2],[1,3],[2,3],[2,4],[3,5],[4,5]]}"#,
    );
    let out = nvee(&["sigma", f.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# 27 convex supports"));
    assert!(text.lines().any(|l| l == "[0,1,2,4]"));
}

#[test]
fn width_and_distances() {
    let tmp = Tmp::new("dist");
    let p = write(&tmp.0, "p.json", r#"{"branches":[3],"weight":[1,2]}"#);
    let a = write(&tmp.0, "a.json", "[[[0,1,2],1]]");
    let b = write(&tmp.0, "b.json", "[[[0,1],1]]");

    let out = nvee(&["width", p.to_str().unwrap(), "[0,1,2]"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");

    let out = nvee(&["dist", p.to_str().unwrap(), a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1");

    // Identical files are at distance zero.
    let out = nvee(&["dist", p.to_str().unwrap(), a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");

    let out = nvee(&["bottleneck", p.to_str().unwrap(), a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1");
}

#[test]
fn variety_count_and_export() {
    let tmp = Tmp::new("variety");
    let p = write(&tmp.0, "p.json", r#"{"branches":[3,6],"weight":[1,2]}"#);
    let x = write(&tmp.0, "x.json", "[[[6,7,8],1]]");
    let yz = write(&tmp.0, "yz.json", "[[[6,7,8],1],[[7,8],1]]");
    let export = tmp.0.join("system.txt");
    let out = nvee(&[
        "variety",
        p.to_str().unwrap(),
        x.to_str().unwrap(),
        yz.to_str().unwrap(),
        "--eps",
        "1",
        "--count",
        "--field",
        "2",
        "--export",
        export.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# 2 solutions over F_2"));
    assert!(std::fs::read_to_string(&export)
        .unwrap()
        .contains("lam[0,0]*mu[0,0] = 1"));
    assert!(export.with_extension("json").exists());
}

#[test]
fn isometry_emits_json_lines() {
    let out = nvee(&["isometry", "--seed", "0", "--trials", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true);
        assert!(v.get("millis").is_none(), "timing only behind --timing");
    }
}

#[test]
fn reproduce_commands() {
    for example in ["ex4", "exnew", "ex3"] {
        let out = nvee(&["reproduce", example]);
        assert!(out.status.success(), "{example} failed");
        assert!(String::from_utf8(out.stdout).unwrap().contains("reproduction: OK"));
    }
    let out = nvee(&["reproduce", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_2() {
    let tmp = Tmp::new("bad");
    let p = write(&tmp.0, "p.json", "{not json");
    let out = nvee(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flags are rejected.
    let out = nvee(&["sigma", "--frobnicate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
