use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn selfsim(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = selfsim(args);
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{stdout}{stderr}"));
    (code, v)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("selfsim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn contract_odometer_succeeds() {
    let (code, v) = json(&["contract", &fixture("odometer.json")]);
    assert_eq!(code, 0);
    let c = &v["canonical"];
    assert_eq!(c["tool"], "selfsim");
    assert_eq!(c["command"], "contract");
    assert_eq!(c["input_digest"].as_str().unwrap().len(), 64);
    assert!(c["config"]["seed"].is_u64());
    assert!(v["wall_time_ms"].is_u64());
    assert!(!c["caveats"].as_array().unwrap().is_empty(), "free model caveat expected");
}

#[test]
fn obstruction_exits_ten() {
    let (code, v) = json(&["contract", &fixture("obstructed.json")]);
    assert_eq!(code, 10);
    assert!(v["canonical"]["result"]["witness"].is_object());
}

#[test]
fn small_budget_is_inconclusive() {
    let (code, _) = json(&["contract", &fixture("basilica.json"), "--max-size", "3", "--max-level", "1"]);
    assert_eq!(code, 20);
}

#[test]
fn levy_finds_the_obstruction() {
    let (code, v) = json(&["levy", &fixture("obstructed.json")]);
    assert_eq!(code, 10);
    let w = &v["canonical"]["result"]["witness"];
    assert_eq!((w["element"].as_str(), w["word"].as_str()), (Some("g"), Some("0")));
    assert_eq!(w["replays"], true);
}

#[test]
fn torus_unit_eigenvalue() {
    let (code, v) = json(&["torus", "--matrix", "2,0,1,1"]);
    assert_eq!(code, 10, "{v}");
    assert_eq!(v["canonical"]["result"]["class"]["kind"], "unit_eigenvalue");
}

#[test]
fn malformed_json_reports_position() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\n  \"model\": {\"kind\": \"free\",\n  oops\n}").unwrap();
    let (code, stdout, stderr) = selfsim(&["contract", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("line 3"), "{stderr}");
    assert!(stderr.contains("column"), "{stderr}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(selfsim(&["torus", "--matrix", "1,2,3"]).0, 2);
    assert_eq!(selfsim(&["complex", &fixture("odometer.json"), "--delta", "bogus"]).0, 2);
    assert_eq!(selfsim(&["nonsense"]).0, 2);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("graph.dot");
    let (code, stdout, _) =
        selfsim(&["complex", &fixture("odometer.json"), "--levels", "3", "--format", "dot", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph"));
    assert!(dot.matches("label=").count() >= 15);
}

#[test]
fn text_format_is_a_projection() {
    let (code, stdout, _) = selfsim(&["fsr", "check", &fixture("quad_2x2.json"), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l.starts_with("command") && l.contains("fsr check")), "{stdout}");
}

#[test]
fn fsr_check_inconclusive_without_mesh() {
    let (code, v) = json(&["fsr", "check", &fixture("quad_1x2.json"), "--max-n", "3"]);
    assert_eq!(code, 20);
    assert!(v["canonical"]["result"]["level"].is_null());
}

#[test]
fn fsr_graph_and_complex_report_delta() {
    let (code, v) = json(&["fsr", "graph", &fixture("quad_2x2.json"), "--levels", "2", "--delta", "exhaustive"]);
    assert_eq!(code, 0);
    assert!(v["canonical"]["result"]["delta"]["exhaustive"].as_bool().unwrap(), "{v}");
    let (code, v) = json(&["complex", &fixture("basilica.json"), "--levels", "3", "--delta", "samples=50", "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"]["result"]["delta_table"][3]["probe"]["seed"], 4);
}

#[test]
fn ratio_reports_exact_half_on_odometer() {
    let (code, v) = json(&["ratio", &fixture("odometer.json"), "--depth", "2", "--length", "16"]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"]["result"]["table"][1]["exact"], "1/2", "{v}");
}

#[test]
fn torus_sweep_small_range() {
    let (code, v) = json(&["torus", "sweep", "--range", "1", "--det-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"]["result"]["agreement"], v["canonical"]["result"]["total"]);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["complex", &fixture("basilica.json"), "--levels", "4", "--delta", "samples=300", "--seed", "2"];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(a["canonical"], b["canonical"]);
}
