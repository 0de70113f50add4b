use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jp_toric::json::{from_json, to_json, DigitsDoc, PeriodicDoc, ReprDoc, StableIsoDoc, ThetaDoc};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
        .unwrap()
}

fn jp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jp-toric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn blocks(doc: &DigitsDoc) -> Vec<Vec<i64>> {
    doc.blocks
        .iter()
        .map(|b| b.iter().map(|x| i64::try_from(&x.0).unwrap()).collect())
        .collect()
}

#[test]
fn expand_half_terminates() {
    let o = jp(&["expand", "-i", fixture("half.json").to_str().unwrap(), "--depth", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: DigitsDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(blocks(&doc), [[0], [2]]);
    assert!(doc.terminated);
    assert_eq!(doc.certified_digits, Some(2));
}

#[test]
fn expand_decimal_half_cannot_certify_termination() {
    let o = jp(&["expand", "--json", r#"{"theta":["0.5"]}"#, "--depth", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let doc: DigitsDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.certified_digits, Some(1));
}

#[test]
fn expand_tribonacci_decimals() {
    let o = jp(&[
        "expand",
        "-i",
        fixture("tribonacci_decimal.json").to_str().unwrap(),
        "--depth",
        "10",
        "--precision",
        "256",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: DigitsDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(blocks(&doc), vec![vec![1, 1]; 10]);
    assert!(!doc.terminated);
}

#[test]
fn expand_lambda_zero_is_input_error() {
    let o = jp(&["expand", "-i", fixture("lambda_zero.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leading lambda entry is zero"));
}

#[test]
fn expand_rejects_low_precision_and_zero_depth() {
    let half = fixture("half.json");
    let half = half.to_str().unwrap();
    assert_eq!(jp(&["expand", "-i", half, "--precision", "32"]).status.code(), Some(1));
    assert_eq!(jp(&["expand", "-i", half, "--depth", "0"]).status.code(), Some(1));
    assert_eq!(jp(&["expand", "--json", "{not json"]).status.code(), Some(1));
}

#[test]
fn expand_batch_runs_each_job() {
    let o = jp(&[
        "expand",
        "--json",
        r#"[{"theta":["1/2"]},{"lambda":[0,1]},{"theta":["1/3","1/5"]}]"#,
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 3);
    assert_eq!(v[0]["terminated"], true);
    assert!(v[1]["error"].as_str().unwrap().contains("lambda"));
    assert_eq!(v[2]["dimension"], 3);
}

#[test]
fn reconstruct_tribonacci_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("widths.csv");
    let out = dir.path().join("theta.json");
    let o = jp(&[
        "reconstruct",
        "-i",
        fixture("tribonacci_digits.json").to_str().unwrap(),
        "--tolerance",
        "1e-8",
        "--csv",
        csv.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: ThetaDoc = from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.dimension, 3);
    assert!(!doc.exact);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("block,log10_width\n"));
    assert_eq!(table.lines().count(), 41);
}

#[test]
fn reconstruct_reports_non_convergence() {
    let o = jp(&[
        "reconstruct",
        "--json",
        r#"{"dimension":3,"blocks":[[1,1],[1,1]]}"#,
        "--tolerance",
        "1e-30",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not converge"));
}

#[test]
fn periodic_tribonacci() {
    let o = jp(&["periodic", "-i", fixture("tribonacci_digits.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: PeriodicDoc = from_json(&stdout(&o)).unwrap();
    assert!(doc.periodic);
    assert_eq!((doc.preperiod, doc.period), (Some(0), Some(1)));
    let m: Vec<Vec<i64>> = doc
        .period_matrix
        .unwrap()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(&x.0).unwrap()).collect())
        .collect();
    assert_eq!(m, [[0, 0, 1], [1, 0, 1], [0, 1, 1]]);
}

#[test]
fn stable_iso_prepended_pair() {
    let o = jp(&["stable-iso", "-i", fixture("stable_pair.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: StableIsoDoc = from_json(&stdout(&o)).unwrap();
    assert!(doc.stably_isomorphic);
    assert_eq!(doc.offsets, Some(vec![0, 2]));
}

#[test]
fn stable_iso_from_files() {
    let t = fixture("tail_n3.json");
    let o = jp(&["stable-iso", t.to_str().unwrap(), t.to_str().unwrap(), "--horizon", "8"]);
    let doc: StableIsoDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.offsets, Some(vec![0, 0]));
}

#[test]
fn repr_two_generator_fixture() {
    let o = jp(&["repr", "-i", fixture("repr_two_generator.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: ReprDoc = from_json(&stdout(&o)).unwrap();
    let m: Vec<Vec<Vec<i64>>> = doc
        .matrices
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| i64::try_from(&x.0).unwrap()).collect()).collect())
        .collect();
    assert_eq!(m[0], [[0, 0, 1], [1, 0, 1], [0, 1, 1]]);
    assert_eq!(m[1], [[0, 0, 1], [1, 0, 2], [0, 1, 1]]);
    assert_eq!(doc.offsets, [1, 1]);
    assert!(doc.report.passed);
    assert_eq!(doc.report.homomorphism.len(), 500);
    assert!(doc.report.relators.iter().all(|r| r.pass));
}

#[test]
fn repr_identity_fixture() {
    let o = jp(&["repr", "-i", fixture("repr_identity.json").to_str().unwrap(), "--probes", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ReprDoc = from_json(&stdout(&o)).unwrap();
    let id: Vec<Vec<i64>> = doc.matrices[0]
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(&x.0).unwrap()).collect())
        .collect();
    assert_eq!(id, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    assert!(doc.report.passed);
}

#[test]
fn repr_disjoint_fixture_exits_3() {
    let o = jp(&["repr", "-i", fixture("repr_disjoint.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn repr_resolves_relative_paths() {
    let o = jp(&["repr", "-i", fixture("repr_paths.json").to_str().unwrap(), "--probes", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn repr_genus_two_is_six_dimensional() {
    let o = jp(&["repr", "-i", fixture("repr_genus2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ReprDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.dimension, 6);
    assert_eq!(doc.genus, Some(2));
    for m in &doc.matrices {
        assert_eq!(m.len(), 6);
        assert!(m.iter().all(|r| r.len() == 6));
    }
}

#[test]
fn dot_matches_golden_files() {
    for (input, levels, gold) in [
        ("fib_one.json", "2", "fib_one_2.dot"),
        ("genus2_digits.json", "2", "genus2_2.dot"),
        ("tribonacci_digits.json", "3", "tribonacci_3.dot"),
    ] {
        let o = jp(&["dot", "-i", fixture(input).to_str().unwrap(), "--levels", levels]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), golden(gold), "{input}");
    }
}

#[test]
fn dot_counts_genus_two_vertices() {
    let text = golden("genus2_2.dot");
    let mut names: Vec<&str> = text
        .split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|w| w.starts_with('v') && w.contains('_') || *w == "root")
        .collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 13);
}

#[test]
fn dot_rejects_terminated_and_zero_levels() {
    let o = jp(&["dot", "--json", r#"{"dimension":2,"blocks":[[0],[2]],"terminated":true}"#]);
    assert_eq!(o.status.code(), Some(1));
    let o = jp(&["dot", "-i", fixture("fib_one.json").to_str().unwrap(), "--levels", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_window_json() {
    let o = jp(&[
        "dot",
        "-i",
        fixture("tribonacci_digits.json").to_str().unwrap(),
        "--levels",
        "3",
        "--window-json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["start"], 1);
    assert_eq!(v["matrices"].as_array().unwrap().len(), 2);
}

#[test]
fn outputs_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["expand", "-i", "tribonacci_roots.json", "--depth", "20"],
        vec!["repr", "-i", "repr_two_generator.json", "--seed", "11"],
        vec!["stable-iso", "-i", "stable_pair.json"],
        vec!["periodic", "-i", "tribonacci_digits.json"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{k}_{rep}.json"));
            let mut a: Vec<String> = args
                .iter()
                .map(|s| if s.ends_with(".json") { fixture(s).to_str().unwrap().to_string() } else { s.to_string() })
                .collect();
            a.push("-o".into());
            a.push(out.to_str().unwrap().into());
            let refs: Vec<&str> = a.iter().map(String::as_str).collect();
            assert_eq!(jp(&refs).status.code(), Some(0));
            texts.push(std::fs::read_to_string(&out).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
        let v: Value = serde_json::from_str(&texts[0]).unwrap();
        assert_eq!(v["schema"], "jp-toric/1");
    }
    let text = std::fs::read_to_string(dir.path().join("1_0.json")).unwrap();
    let doc: ReprDoc = from_json(&text).unwrap();
    assert_eq!(to_json(&doc).unwrap(), text);
}

#[test]
fn seeds_change_sampled_words() {
    let f = fixture("repr_two_generator.json");
    let a = stdout(&jp(&["repr", "-i", f.to_str().unwrap(), "--seed", "1", "--samples", "5"]));
    let b = stdout(&jp(&["repr", "-i", f.to_str().unwrap(), "--seed", "2", "--samples", "5"]));
    assert_ne!(a, b);
}
