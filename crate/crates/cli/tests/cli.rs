use std::process::Command;

use serde_json::Value;

fn massey(args: &[&str]) -> (i32, Value) {
    massey_env(args, &[])
}

fn massey_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_massey"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run massey");
    let text = String::from_utf8(out.stdout).expect("utf8");
    let json = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().expect("exit code"), json)
}

fn tmp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("massey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tilde_u5_at_two_is_u5() {
    let (code, r) = massey(&["verify", "tilde-u5", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdicts"]["equals_u5"], true);
    assert_eq!(r["witnesses"]["order_log"], 10);
}

#[test]
fn lcs_at_three() {
    let (code, r) = massey(&["verify", "lcs", "--p", "3", "--max-mem", "4G"]);
    assert_eq!(code, 0);
    let orders: Vec<u64> = r["witnesses"]["orders"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(orders, [3u64.pow(17), 3u64.pow(13), 3u64.pow(10), 3u64.pow(6), 27, 3, 1]);
    assert_eq!(r["witnesses"]["report"]["terms"][0]["structural"], true);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let (code, r) = massey(&["verify", "lcs"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "parse");
    let (code, r) = massey(&["verify", "nonsense"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "usage");
    let bad = tmp("bad.grp", "2 3 unipotent\n2 3\n1 1 0\n0 1 0\n1 0 1\n");
    let (code, r) = massey(&["massey", "check", "--group", &bad, "--chars", "1;1", "--target", "u3"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "parse");
}

#[test]
fn resource_limits_exit_two() {
    let (code, r) = massey(&["verify", "lcs", "--p", "3", "--max-elements", "1000"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "resource");
}

#[test]
fn environment_overrides_flags() {
    let (code, r) = massey_env(&["verify", "cocycles"], &[("MASSEY_P", "3")]);
    assert_eq!(code, 0);
    assert_eq!(r["parameters"]["p"], 3);
}

#[test]
fn reports_are_deterministic_outside_timings() {
    let args = ["verify", "cup-extension", "--p", "3", "--samples", "2000", "--seed", "11"];
    let (_, mut a) = massey(&args);
    let (_, mut b) = massey(&args);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn emitted_generators_feed_massey_check() {
    let out = Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(["build", "tilde-u5", "--p", "2", "--emit-generators"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let path = tmp("tu5.grp", &String::from_utf8(out.stdout).unwrap());
    let chars = "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1";
    let (code, r) = massey(&["massey", "check", "--group", &path, "--chars", chars, "--target", "u5"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["found"], true);
    assert_eq!(r["witnesses"]["group_order"], 1024);
}

#[test]
fn cyclic_three_with_equal_characters() {
    let path = tmp("c3.grp", "3 3 cyclic\n");
    let (_, r) = massey(&["massey", "check", "--group", &path, "--chars", "1;1", "--target", "u3"]);
    assert_eq!(r["witnesses"]["found"], true);
    let (_, r) = massey(&["massey", "check", "--group", &path, "--chars", "1;1", "--target", "u3w1"]);
    assert_eq!(r["witnesses"]["found"], false);
}

#[test]
fn local_counterexample() {
    let (code, r) = massey(&["local", "find-bc", "--q", "7", "--p", "3", "t", "t", "t", "t", "--brute"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["result"]["status"], "hypothesis");
    assert_eq!(r["witnesses"]["brute_force"], Value::Null);
    let (_, r) = massey(&["variety", "decide-local", "--q", "7", "--p", "3", "t", "t", "t", "t"]);
    assert_eq!(r["witnesses"]["solvable"], false);
}

#[test]
fn series_files() {
    // 3 + t, a unit whose class is that of 3
    let path = tmp("s.json", r#"{"val": 0, "coeffs": [3, 1]}"#);
    let arg = format!("@{path}");
    let (code, r) = massey(&["local", "symbol", "--q", "7", "--p", "3", &arg, "t"]);
    assert_eq!(code, 0);
    let (_, m) = massey(&["local", "symbol", "--q", "7", "--p", "3", "3", "t"]);
    assert_eq!(r["witnesses"]["symbol"], m["witnesses"]["symbol"]);
}

#[test]
fn solved_points_check_and_tampered_points_fail() {
    let (code, r) = massey(&["variety", "solve", "--q", "7", "--p", "3", "3", "2", "5", "6"]);
    assert_eq!(code, 0);
    let mut point = r["witnesses"]["point"].clone();
    let path = tmp("pt.json", &point.to_string());
    let (code, c) = massey(&["variety", "check", "--q", "7", "--p", "3", "3", "2", "5", "6", "--point", &path]);
    assert_eq!(code, 0, "{c}");
    let b0 = point["beta"][0].as_u64().unwrap();
    point["beta"][0] = Value::from((b0 + 1) % 7);
    let path = tmp("pt_bad.json", &point.to_string());
    let (code, c) = massey(&["variety", "check", "--q", "7", "--p", "3", "3", "2", "5", "6", "--point", &path]);
    assert_eq!(code, 1);
    assert_eq!(c["verdicts"]["norm_b"], false);
}
