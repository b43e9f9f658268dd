use std::path::PathBuf;
use std::process::{Command, Output};

use philab::format::parse_structure;
use philab::genspec::digest;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn philab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_philab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn id_on_fixtures_and_generators() {
    let s1 = fixture("s1.phi");
    let out = philab(&["id", "-i", &s1, "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "ID = 2, witness = [0, 1]\n");
    assert_eq!(json(&philab(&["id", "--gen", "shattered:3"]))["id"], 3);
    assert_eq!(json(&philab(&["id", "-i", &fixture("chain5.phi")]))["id"], 1);
}

#[test]
fn types_over_base() {
    let v = json(&philab(&["types", "-i", &fixture("s1.phi")]));
    assert_eq!(v["count"], 4);
    assert_eq!(v["independent"], true);
    assert_eq!(v["types"][3], serde_json::json!({"b0": 1, "b1": 1}));
    let chain = json(&philab(&["types", "-i", &fixture("chain5.phi"), "--over", "ALL"]));
    assert_eq!(chain["count"], 5);
}

#[test]
fn isolate_shattered_keeps_full_type_with_diagnostic() {
    let v = json(&philab(&["isolate", "--gen", "shattered:3", "--of", "5"]));
    assert_eq!(v["subtype"], v["type"]);
    assert_eq!(v["subtype"].as_object().unwrap().len(), 3);
    assert_eq!(v["diagnostic"], "saturation-deficit");
    assert_eq!(v["budget"]["ok"], true);
    assert_eq!(v["defining_formula"]["defines"], true);
}

#[test]
fn isolate_chain_cut_is_small() {
    for k in ["all", "2", "3"] {
        let v = json(&philab(&["isolate", "--gen", "order:7/0,3,6", "--of", "4", "--k-sat", k]));
        assert!(v["subtype"].as_object().unwrap().len() <= 2);
        assert!(v["budget"]["2K"].as_u64().unwrap() <= 2);
        assert_eq!(v["budget"]["2ID"], 2);
    }
}

#[test]
fn isolate_explicit_literals() {
    let v = json(&philab(&["isolate", "-i", &fixture("s1.phi"), "--lits", "b0=1,b1=1"]));
    assert_eq!(v["subtype"], serde_json::json!({"b0": 1, "b1": 1}));
    let clash = philab(&["isolate", "-i", &fixture("s1.phi"), "--lits", "b0=1,b0=0"]);
    assert_eq!(code(&clash), 4);
    let unknown = philab(&["isolate", "-i", &fixture("s1.phi"), "--lits", "b9=1"]);
    assert_eq!(code(&unknown), 4);
}

#[test]
fn config_certificate_shape() {
    let v = json(&philab(&["config", "--gen", "order:7/0,3,6", "--of", "1", "--strategy", "exhaustive"]));
    for key in ["pairs", "size", "id", "bound_ok", "checker"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["bound_ok"], true);
    assert!(v["size"].as_u64().unwrap() >= 1);
    assert_eq!(v["checker"]["violation"], Value::Null);
}

#[test]
fn define_and_embed() {
    let v = json(&philab(&["define", "-i", &fixture("chain5.phi"), "--of", "3"]));
    assert_eq!(v["formula"]["defines"], true);
    assert_eq!(v["values"].as_array().unwrap().len(), 4);
    let e = json(&philab(&["embed", "-i", &fixture("chain5.phi"), "--of", "2", "--k-sat", "2"]));
    assert_eq!(e["trace_defined"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["isolate", "--gen", "random:unions2", "--seed", "7", "--of", "3", "--k-sat", "2"];
    assert_eq!(philab(&args).stdout, philab(&args).stdout);
    let verify = ["verify", "--suite", "oracle", "--gen", "random", "--seeds", "0..3"];
    assert_eq!(philab(&verify).stdout, philab(&verify).stdout);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("philab-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.phi");
    std::fs::write(&bad, "# phi-structure v1\nX 1\nY 2\nB 0\nTHETA ALL\nMATRIX\n0102\n").unwrap();
    let out = philab(&["id", "-i", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid matrix character at line 7"));
    assert_eq!(code(&philab(&["id", "--gen", "shattered:6"])), 3);
    assert_eq!(code(&philab(&["id", "--gen", "cube:3"])), 4);
    assert_eq!(code(&philab(&["id", "--gen", "shattered:2", "-i", &fixture("s1.phi")])), 4);
    assert_eq!(code(&philab(&["id"])), 4);
    assert_eq!(code(&philab(&["verify", "--suite", "nonsense", "--corpus"])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gen_writes_structure_and_sidecar() {
    let dir = std::env::temp_dir().join(format!("philab-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eq.phi");
    let out = philab(&["gen", "--gen", "eqrel:1,2", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let s = parse_structure(&text).unwrap();
    assert_eq!(s.num_params(), 125);
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("eq.phi.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["digest"], digest(&text));
    assert_eq!(meta["params"].as_array().unwrap().len(), 125);
    assert_eq!(meta["params"][0], serde_json::json!({"triple": [0, 0, 0]}));
    let stdout = philab(&["gen", "--gen", "eqrel:1,2"]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites() {
    let bound = philab(&["verify", "--suite", "bound", "--gen", "random", "--seeds", "0..99"]);
    let v = json(&bound);
    assert_eq!(v["instances"], 100);
    assert_eq!(v["passed"], true);
    assert_eq!(json(&philab(&["verify", "--suite", "shatter", "--gen", "shattered:4"]))["passed"], true);
    let growth = json(&philab(&["verify", "--suite", "growth", "--gen", "eqrel:1,2,3"]));
    assert_eq!(growth["values"], serde_json::json!([2, 3, 4]));
}

#[test]
fn verify_oracle_logs_agreement() {
    let log = std::env::temp_dir().join(format!("philab-oracle-{}.jsonl", std::process::id()));
    let out = philab(&["verify", "--suite", "oracle", "-i", &fixture("s1.phi"), "--log", log.to_str().unwrap()]);
    assert_eq!(json(&out)["passed"], true);
    let lines = std::fs::read_to_string(&log).unwrap();
    assert!(lines.lines().count() > 3);
    for line in lines.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["agree"], true);
        assert_eq!(r["instance"].as_str().unwrap().len(), 64);
    }
    std::fs::remove_file(&log).unwrap();
}

#[test]
fn verify_reports_violations_with_exit_one() {
    // Remark failures on the corpus are known; the exit code must say so.
    let out = philab(&["verify", "--suite", "remark", "--gen", "random", "--seeds", "20"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["failures"][0]["counterexample"]["tuple"].is_array());
}
