use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treehelly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn validate(schema: &str, text: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{schema}.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let instance: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{text}");
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn p6_system() -> PathBuf {
    let body = r#"{"host": "P6", "members": [[1], [2, 3], [5, 6]]}"#;
    validate("system", body);
    scratch("p6.json", body)
}

#[test]
fn p6_flower() {
    let o = bin(&["gen", "flower", "--pattern", "P6", "--roots", "2,5", "--q", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    validate("graph", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["vertices"], 18);
    assert_eq!(v["edges"], 20);
    assert_eq!(v["labels"][0], serde_json::json!({"root": {"vertex": 2}}));

    let g6 = bin(&["gen", "flower", "--pattern", "P6", "--roots", "2,5", "--q", "4", "--format", "graph6"]);
    assert_eq!(stdout(&g6).trim(), v["graph6"].as_str().unwrap());
}

#[test]
fn gen_variants() {
    let o = bin(&["gen", "theta", "--a", "3", "--b", "2", "--c", "1"]);
    validate("graph", &stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["vertices"].as_u64(), v["edges"].as_u64()), (Some(5), Some(6)));

    let o = bin(&["gen", "dup-leaves", "--tree", "S3", "--m", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], 7);

    let o = bin(&["gen", "root-set", "--tree", "P9", "--k", "3"]);
    validate("root-set", &stdout(&o));
    assert_eq!(stdout(&o).trim(), r#"{"k":3,"roots":[2,5,8],"b":3,"path":[1,2,3,4,5,6,7,8,9]}"#);

    let o = bin(&["gen", "theta", "--a", "2", "--b", "3", "--format", "edges"]);
    assert_eq!(stdout(&o).lines().count(), 7);
    assert!(stdout(&o).starts_with("6\n"));
}

#[test]
fn min_edge_example() {
    let sys = p6_system();
    let o = bin(&["pierce", "min-edge", "--system", sys.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"size\":2,\"edges\":[[1,2],[5,6]]}\n");
    validate("min-edge", &stdout(&o));
}

#[test]
fn mixed_and_check() {
    let sys = p6_system();
    let s = sys.to_str().unwrap();
    let o = bin(&["pierce", "mixed", "--system", s, "--a", "1", "--b", "1"]);
    validate("mixed", &stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["found"], true);

    let o = bin(&["pierce", "check", "--system", s, "--edges", "1-2,5-6"]);
    assert_eq!(o.status.code(), Some(0));
    validate("check", &stdout(&o));
    let o = bin(&["pierce", "check", "--system", s, "--edges", "1-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), r#"{"pierces":false,"unpierced":[3]}"#);
    let o = bin(&["pierce", "check", "--system", s, "--edges", "1-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn helly_commands() {
    let sys = p6_system();
    let o = bin(&["helly", "verify", "--system", sys.to_str().unwrap(), "--k", "1"]);
    assert!(o.status.success());
    validate("helly", &stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["local_ok"], false);
    assert_eq!(v["local_witness"].as_array().unwrap().len(), 2);

    let args = ["helly", "probe", "--a", "1", "--b", "1", "--h", "3", "--trials", "300", "--seed", "11"];
    let a = bin(&args);
    validate("probe", &stdout(&a));
    assert_eq!(stdout(&a), stdout(&bin(&args)));
}

#[test]
fn count_commands() {
    let o = bin(&["count", "copies", "--pattern", "P3", "--host", "K4"]);
    validate("count", &stdout(&o));
    assert_eq!(stdout(&o).trim(), r#"{"pattern":"Bg","host":"C~","mon":24,"aut":2,"copies":12}"#);

    let o = bin(&["count", "mon", "--pattern", "K2", "--host", "C5"]);
    validate("count", &stdout(&o));
    assert!(stdout(&o).contains("\"mon\":10"));

    let o = bin(&["count", "sunflower", "--pattern", "P3", "--host", "S4", "--q", "3"]);
    validate("sunflower", &stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["maps"].as_array().unwrap().len(), 3);

    let args = ["count", "distinguishing", "--pattern", "P3", "--host", "C6", "--seed", "5"];
    let o = bin(&args);
    validate("distinguishing", &stdout(&o));
    assert_eq!(stdout(&o), stdout(&bin(&args)));
}

#[test]
fn extremal_and_render() {
    let o = bin(&["extremal", "edges", "--forbid", "K3", "--n", "3..6"]);
    validate("extremal", &stdout(&o));
    let report = scratch("ex.json", &stdout(&o));
    let table = stdout(&bin(&["render", "--input", report.to_str().unwrap()]));
    let values: Vec<&str> = table.lines().skip(3).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(values, ["2", "4", "6", "9"]);
    let csv = stdout(&bin(&["render", "--input", report.to_str().unwrap(), "--format", "csv"]));
    assert!(csv.contains("\nn,value,extremal_graphs\n3,2,BW\n"));

    let o = bin(&["extremal", "copies", "--tree", "K2", "--forbid", "C4", "--n", "5"]);
    validate("extremal", &stdout(&o));
    assert!(stdout(&o).contains("\"value\":6"));

    let o = bin(&["extremal", "dichotomy", "--tree", "P5", "--forbid", "K3", "--k", "1"]);
    validate("dichotomy", &stdout(&o));
    let report = scratch("dich.json", &stdout(&o));
    let table = stdout(&bin(&["render", "--input", report.to_str().unwrap()]));
    assert!(table.contains("case2_fired: true"));
    assert!(table.lines().any(|l| l.starts_with("[2,3]") && l.contains("verified=true")));
}

#[test]
fn render_edge_cases() {
    let empty = scratch("empty.json", "{}");
    let o = bin(&["render", "--input", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let bad = scratch("bad.json", r#"{"records": "nope"}"#);
    let o = bin(&["render", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    validate("error", &String::from_utf8(o.stderr.clone()).unwrap());
}

#[test]
fn verify_example() {
    let o = bin(&["verify", "--suite", "edge-helly", "--trials", "0", "--exhaustive", "P6", "--k", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    validate("verify", &stdout(&o));
}

#[test]
fn worker_count_does_not_change_bytes() {
    let runs = [
        vec!["verify", "--suite", "edge-helly", "--trials", "300", "--exhaustive", "P5", "--seed", "9"],
        vec!["extremal", "edges", "--forbid", "C4", "--n", "1..6"],
    ];
    for args in runs {
        let one = bin(&[&["--workers", "1"], &args[..]].concat());
        let four = bin(&[&["--workers", "4"], &args[..]].concat());
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_are_json() {
    for args in [
        vec!["bogus"],
        vec!["gen", "flower", "--pattern", "P6", "--roots", "9", "--q", "2"],
        vec!["gen", "flower", "--pattern", "P3", "--roots", "1,2,3", "--q", "2"],
        vec!["verify", "--suite", "solvers"],
        vec!["pierce", "min-edge", "--system", "/nonexistent.json"],
    ] {
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        validate("error", &String::from_utf8(o.stderr.clone()).unwrap());
    }
}

#[test]
fn timings_go_to_stderr() {
    let o = bin(&["--timings", "count", "mon", "--pattern", "K2", "--host", "K3"]);
    assert!(String::from_utf8(o.stderr.clone()).unwrap().contains("elapsed_ms"));
    validate("count", &stdout(&o));
}
