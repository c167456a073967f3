use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab")).args(args).output().expect("binary runs")
}

fn run_threads(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn torsion_enum_ut2() {
    let o = run(&["torsion-enum", "UT2(2)", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["count"], 2);
    assert_eq!(v["notions"].as_array().unwrap().len(), 2);
}

#[test]
fn torsion_check_z4_reports_regularity() {
    let o = run(&["torsion-check", "Z(4)", "--filter", "2;1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("axiom (5)"));
    let v = json(&run(&["torsion-check", "Z(4)", "--filter", "2;1", "--json"]));
    assert_eq!(v["valid"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["axiom"] == 5));
}

#[test]
fn torsion_check_valid_filter() {
    let o = run(&["torsion-check", "UT2(2)", "--filter", "e11,e12;1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("valid torsion notion"));
}

#[test]
fn classify_ut2_example() {
    let o = run(&["classify", "UT2(2)", "--quasi", "e11,e12", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rcm"], true);
    assert_eq!(v["is_variety"], false);
    assert_eq!(v["is_trivial"], false);
    assert_eq!(v["I"]["elements"], serde_json::json!(["0"]));
    assert_eq!(v["filter"].as_array().unwrap().len(), 2);
    assert_eq!(v["corpus_checked"]["bound"], 2);
    assert!(v.get("violation").is_none());
}

#[test]
fn classify_filter_replays_as_valid_notion() {
    let v = json(&run(&["classify", "UT2(2)", "--quasi", "e11,e12", "--json"]));
    let filter: Vec<String> = v["filter"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["generators"].as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect::<Vec<_>>().join(","))
        .collect();
    let o = run(&["torsion-check", "UT2(2)", "--filter", &filter.join(";")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn classify_trivial_and_identities() {
    let v = json(&run(&["classify", "Z(4)", "--quasi", "2", "--json"]));
    assert_eq!(v["is_trivial"], true);
    let v = json(&run(&["classify", "Z(4)", "--ident", "2", "--json"]));
    assert_eq!(v["I"]["generators"], serde_json::json!(["2"]));
    assert_eq!(v["is_variety"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "UT2(2)", "--quasi", "e11,e12", "--json"];
    let a = run_threads(&args, 1);
    let b = run_threads(&args, 4);
    let c = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let census = ["census", "Z(6)", "UT2(2)", "quot(UT2(2),e12)"];
    assert_eq!(run_threads(&census, 1).stdout, run_threads(&census, 8).stdout);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&run(&["ring-info", "W(3)"])), 2);
    assert_eq!(code(&run(&["classify", "UT2(2)", "--quasi", "e13"])), 2);
    assert_eq!(code(&run(&["torsion-check", "Z(4)"])), 2);
    assert_eq!(code(&run(&["rcm", "Z(4)", "--filter", "1", "--bound", "9"])), 2);
    assert_eq!(code(&run(&["delta-reduce"])), 2);
}

#[test]
fn census_entries() {
    let o = run(&["census"]);
    assert_eq!(code(&o), 0);
    let v = json(&run(&["census", "--json"]));
    assert!(v["entries"].as_array().unwrap().is_empty());

    let o = run(&["census", "Z(6)", "prod(Z(2),Z(3))", "UT2(2)", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries[0]["notions"], 1);
    assert_eq!(entries[1]["notions"], 1);
    assert_eq!(entries[2]["notions"], 2);
    assert!(entries[0]["details"][0]["collapse"].is_array());
    assert!(entries[2]["details"][0].get("collapse").is_none());

    let o = run(&["census", "Z(2)", "nope", "--json"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["entries"][0]["notions"], 1);
    assert!(v["entries"][1]["error"].is_string());
}

#[test]
fn closure_and_wep() {
    let o = run(&["closure", "UT2(2)", "--filter", "e11,e12;1", "--module", "R", "--sub", "e12", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["closure"]["elements"].as_array().unwrap().len(), 4);
    // R/(e11,e12) is killed by (e11,e12)
    let o = run(&["closure", "UT2(2)", "--filter", "e11,e12;1", "--module", "quot(R;e11,e12)", "--sub", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["wep", "UT2(2)", "--filter", "e11,e12;1", "--module", "R^2"])), 0);
    assert_eq!(code(&run(&["closure", "Z(4)", "--filter", "2;1", "--module", "R", "--sub", "0"])), 1);
}

#[test]
fn rcm_command() {
    let v = json(&run(&["rcm", "UT2(2)", "--filter", "e11,e12;1", "--json"]));
    assert_eq!(v["modular"], true);
    assert_eq!(v["wep"], true);
    assert_eq!(v["modules_total"], 127);
}

#[test]
fn delta_reduce_file() {
    let good = scratch(
        "good.json",
        r#"{"ring":"UT2(2)","u_arity":1,"rows":[{"a":"e11","b":"e11","c":["e12"],"d":["e12"],"e":[]}]}"#,
    );
    let o = run(&["delta-reduce", good.to_str().unwrap(), "--module", "R", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["reducible"], true);
    assert_eq!(v["ideal"]["generators"], serde_json::json!(["e11"]));

    let bad = scratch("bad.json", r#"{"ring":"Z(4)","rows":[{"a":1,"b":1,"c":[],"d":[],"e":[]}]}"#);
    let o = run(&["delta-reduce", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not reducible"));

    let broken = scratch("broken.json", "{");
    assert_eq!(code(&run(&["delta-reduce", broken.to_str().unwrap()])), 2);
}

#[test]
fn delta_sweep_is_seeded() {
    let args = ["delta-reduce", "--seed", "11", "--count", "40", "--ring", "UT2(2)", "--json"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(json(&a)["disagreements"].as_array().unwrap().len(), 0);
    assert_eq!(a.stdout, run(&args).stdout);
}
