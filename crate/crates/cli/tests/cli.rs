use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lzdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lzdg"))
        .args(args)
        .env_remove("LZDG_OUT")
        .output()
        .expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = lzdg(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lzdg-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_elapsed);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

#[test]
fn build_vertex_counts() {
    let dir = scratch("build");
    let d = dir.to_str().unwrap();
    let v = json_out(&["build", "--ring", "quat", "--n", "4", "--export", "dot,json", "--out", d]);
    assert_eq!(v["vertices"], 127);
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("quat_n4.json")).unwrap()).unwrap();
    assert_eq!(graph["vertices"].as_array().unwrap().len(), 127);
    let dot = std::fs::read_to_string(dir.join("quat_n4.dot")).unwrap();
    assert_eq!(dot.matches("label=").count(), 127);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "build");
    assert_eq!(manifest["files"].as_array().unwrap().len(), 3);

    assert_eq!(json_out(&["build", "--ring", "mat", "--p", "3", "--s", "1"])["vertices"], 32);
    assert_eq!(json_out(&["build", "--ring", "quat", "--n", "2"])["vertices"], 7);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn csv_export_lists_classes() {
    let dir = scratch("csv");
    let v = json_out(&["build", "--n", "2", "--export", "csv", "--out", dir.to_str().unwrap()]);
    let csv = std::fs::read_to_string(dir.join("quat_n2.classes.csv")).unwrap();
    assert!(csv.starts_with("label,size,degree,self_adjacent"));
    assert_eq!(csv.lines().count() as u64, 1 + v["twin_classes"].as_u64().unwrap());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn domination_examples() {
    let v = json_out(&["domination", "--ring", "mat", "--p", "3", "--s", "2", "--exact"]);
    assert_eq!(v["gamma"], 4);
    assert_eq!(v["optimal"], true);
    let v = json_out(&["domination", "--ring", "quat", "--n", "6", "--exact"]);
    assert_eq!(v["gamma"], 5);
    let total: u64 = v["witness"].as_array().unwrap().iter().map(|w| w[1].as_u64().unwrap()).sum();
    assert_eq!(total, 5);
    let v = json_out(&["domination", "--ring", "quat", "--n", "8", "--construct"]);
    assert_eq!(v["witness"].as_array().unwrap().len(), 1);
}

#[test]
fn aut_orders() {
    for (s, order) in [("2", 12), ("3", 36), ("4", 432)] {
        let v = json_out(&["aut", "--s", s]);
        assert_eq!(v["aut_order"], order);
        assert_eq!(v["predicted_order"], order);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lzdg(&["build", "--ring", "mat", "--p", "3"]).status.code(), Some(2));
    assert_eq!(lzdg(&["build", "--n", "4", "--export", "png"]).status.code(), Some(2));
    assert_eq!(lzdg(&["domination", "--n", "6", "--exact", "--construct"]).status.code(), Some(2));
    assert_eq!(lzdg(&["frobnicate"]).status.code(), Some(2));
    let dir = scratch("badcfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "max_s = 2\nunknown_key = 1\n").unwrap();
    assert_eq!(lzdg(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn resource_cap_exits_3() {
    let out = lzdg(&["build", "--n", "64"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_small_config_passes() {
    let dir = scratch("verify");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "max_s = 2\nrandom_graphs = 10\niso_samples = 2000\n").unwrap();
    let out = lzdg(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("SKIP aut.order.3"));
    assert!(stdout.contains("PASS twins.2"));
    assert!(dir.join("verify.json").exists());

    let out = lzdg(&["verify", "--config", cfg.to_str().unwrap(), "--max-s", "1"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("SKIP aut.lemmas.2"));
    assert!(stdout.contains("PASS factor.dyadic.1"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_corrupted_fixture_fails() {
    let dir = scratch("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let text = include_str!("../../core/fixtures/expected.json");
    let mut fx: Value = serde_json::from_str(text).unwrap();
    fx["partner.3"]["expected"]["failures"] = Value::from(1);
    let path = dir.join("bad.json");
    std::fs::write(&path, serde_json::to_string(&fx).unwrap()).unwrap();
    let out = lzdg(&["verify", "--max-s", "1", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL partner.3"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn output_independent_of_thread_count() {
    let run = |threads: &str| {
        let mut v = json_out(&["--threads", threads, "domination", "--n", "12", "--exact"]);
        strip_elapsed(&mut v);
        v
    };
    assert_eq!(run("1"), run("3"));
    let build = |threads: &str| lzdg(&["--threads", threads, "build", "--ring", "mat", "--p", "3", "--s", "1"]).stdout;
    assert_eq!(build("1"), build("4"));
}
