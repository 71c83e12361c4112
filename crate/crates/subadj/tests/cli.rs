use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use subadj::cli::run;
use subadj::report::{CbfJson, FamilyJson, FsupportReport, ModelReport, OmegaReport, StrataReport, VerifyReport};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("subadj").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn round_trip<T: Serialize + DeserializeOwned>(args: &[&str]) -> T {
    let value = json(args);
    let typed: T = serde_json::from_value(value.clone()).unwrap();
    assert_eq!(serde_json::to_value(&typed).unwrap(), value);
    typed
}

#[test]
fn strata_of_four_points() {
    let r: StrataReport = round_trip(&["strata", "--n", "4"]);
    assert_eq!(r.count, 3);
    assert_eq!(r.decompositions.len(), 3);
    let (code, out, _) = call(&["strata", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n = 4  boundary: 3"));
}

#[test]
fn strata_of_a_tree() {
    let r: StrataReport = round_trip(&["strata", "--tree", "five-point-tree.json"]);
    assert_eq!(r.source, "edge_cuts");
    assert_eq!(r.decompositions[0].first, vec![1, 2]);
}

#[test]
fn omega_uniform_half_weights() {
    let r: OmegaReport = round_trip(&["omega", "--d", "1/2,1/2,1/2,1/2", "--m", "2", "--collide", "1,2", "--section"]);
    assert_eq!(r.p, 24);
    assert_eq!(r.pole_orders, vec![24; 4]);
    assert!(r.divisor_empty);
    let c = &r.collisions[0];
    assert_eq!(c.order, 8);
    assert_eq!(serde_json::to_value(&c.moduli_coefficient).unwrap(), "1/6");
    assert_eq!(serde_json::to_value(&c.normalized).unwrap(), "1/6");
}

#[test]
fn omega_tangency_and_defaults() {
    let v = json(&["omega", "--d", "1/2,1/2,1/2,1/2", "--collide", "1,2", "--tangency", "3", "--points", "-1,0,1,5"]);
    assert_eq!(v["m"], 2);
    assert_eq!(v["collisions"][0]["base"], "-2");
    assert_eq!(v["collisions"][0]["normalized"], "1/2");
}

#[test]
fn fsupport_on_the_five_point_tree() {
    let r: FsupportReport = round_trip(&["fsupport", "--tree", "five-point-tree.json", "--d", "4/7,4/7,2/7,2/7,2/7"]);
    assert_eq!(r.cuts[0].charged, vec![3, 4, 5]);
    assert_eq!(serde_json::to_value(&r.cuts[0].coefficient).unwrap(), "1/7");
    assert_eq!(r.distinguished, 0);
}

#[test]
fn cbf_on_bundled_models() {
    let f: FamilyJson = round_trip(&["cbf", "remark5.json"]);
    assert_eq!(serde_json::to_value(&f.deg_l).unwrap(), "0");
    assert_eq!(f.component, "X1");
    let s: CbfJson = round_trip(&["cbf", "universal4.json", "--check"]);
    assert_eq!(serde_json::to_value(&s.deg_m).unwrap(), "1/2");
    let m: CbfJson = round_trip(&["cbf", "multiplicity2.json", "--normalize"]);
    assert_eq!(serde_json::to_value(&m.deg_m).unwrap(), "1/2");
    assert!(m.discriminant.iter().all(|p| p.value.0 == subadj_core::rational::zero()));
}

#[test]
fn model_report_round_trips() {
    let r: ModelReport = round_trip(&["model", "example8-n3.json"]);
    assert!(r.log_class_is_pullback);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = call(&["verify", "--format", "json"]);
    let b = call(&["verify", "--format", "json"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a.1, b.1);
    let r: VerifyReport = serde_json::from_str(&a.1).unwrap();
    assert!(r.passed && r.checks.iter().all(|c| c.passed));
}

#[test]
fn input_errors_exit_two_with_codes() {
    let (code, out, err) = call(&["--format", "json", "omega", "--d", "1/2,1/3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["code"], "E_WEIGHTS");

    let (code, _, err) = call(&["strata", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E_INPUT]"), "{err}");

    let (code, _, err) = call(&["cbf", "no-such-model.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E_IO]"), "{err}");

    let (code, _, err) = call(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E_USAGE]"), "{err}");

    let (code, _, err) = call(&["omega", "--d", "1/2,x"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E_PARSE]"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn failed_check_exits_one() {
    let dir = std::env::temp_dir().join(format!("subadj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("negative.json");
    let sections: Vec<String> =
        (1..=4).map(|i| format!(r#"{{ "name": "P{i}", "a": "0", "d": "1/2" }}"#)).collect();
    let text = format!(r#"{{ "genus": 0, "e": 1, "sections": [{}] }}"#, sections.join(", "));
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["--format", "json", "cbf", p]);
    assert_eq!(code, 0);
    let r: CbfJson = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_value(&r.deg_m).unwrap(), "-1");
    assert!(!r.flags.deg_m_nonnegative);
    let (code, _, err) = call(&["cbf", p, "--check"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[E_ASSERTION]"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn family_file_resolves_component_paths_on_disk() {
    let dir = std::env::temp_dir().join(format!("subadj-family-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("pencil.json"), subadj::models::bundled("universal4.json").unwrap()).unwrap();
    let family = r#"{
      "weights": ["3/4", "3/4", "1/4", "1/4"],
      "components": [{ "name": "X", "path": "pencil.json" }],
      "marks": [
        { "label": 1, "component": "X", "section": "P1" },
        { "label": 2, "component": "X", "section": "P2" },
        { "label": 3, "component": "X", "section": "P3" },
        { "label": 4, "component": "X", "section": "P4" }
      ]
    }"#;
    let path = dir.join("family.json");
    std::fs::write(&path, family).unwrap();
    let v = json(&["cbf", path.to_str().unwrap()]);
    assert_eq!(v["deg_l"], "1/4");
    std::fs::remove_dir_all(&dir).unwrap();
}
