mod common;

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use common::{entropic, fixture};
use entropic::analytic::{cycle_inequalities, local_basic_inequalities};
use entropic::cones::elemental_system;
use entropic::entropy::{JointDistribution, MarginalModel};
use entropic::io::{emit_model, parse_distribution, parse_inequalities, parse_partial, Labels, ModelFile};
use entropic::polyhedra::{LinearInequality, Rational};
use entropic::{Scenario, SubsetIndex};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn facets(dir: &Path, scenario_fixture: &str, n: Option<usize>, name: &str) -> PathBuf {
    let scenario = fixture(dir, scenario_fixture, n, &format!("{name}.json"));
    let out = dir.join(format!("{name}.ineq"));
    let run = entropic(dir, &["project", scenario.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    out
}

fn sorted(rows: &[LinearInequality]) -> Vec<LinearInequality> {
    let mut v = rows.to_vec();
    v.sort();
    v
}

#[test]
fn triangle_projection_is_local_basic_plus_cycle() {
    let dir = TempDir::new().unwrap();
    let path = facets(dir.path(), "cycle-scenario", Some(3), "c3");
    let file = parse_inequalities(&std::fs::read_to_string(path).unwrap()).unwrap();
    let cycle = cycle_inequalities(3).unwrap();
    let local = local_basic_inequalities(3).unwrap();
    for row in file.system.rows() {
        assert!(cycle.rows().contains(row) || local.rows().contains(row), "{row}");
    }
    for row in cycle.rows() {
        assert!(file.system.rows().contains(row), "{row}");
    }
    // the dropped local rows are the singleton bounds H(Ai) >= 0
    let dropped: Vec<_> = local.rows().iter().filter(|r| !file.system.rows().contains(r)).collect();
    assert_eq!(dropped.len(), 3);
    assert!(dropped.iter().all(|r| r.terms().len() == 1));
}

#[test]
fn projecting_onto_everything_keeps_the_elemental_system() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("full.json"), r#"{"n": 3, "generators": [["A1", "A2", "A3"]]}"#).unwrap();
    let run = entropic(dir.path(), &["project", "full.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let file = parse_inequalities(&run.stdout).unwrap();
    let elemental = elemental_system(3).unwrap();
    let expected: Vec<LinearInequality> = elemental
        .rows()
        .iter()
        .map(|r| LinearInequality::new(r.terms().iter().copied().filter(|t| !t.0.is_empty()), r.sense()).unwrap())
        .filter(|r| !r.is_trivial())
        .collect();
    assert_eq!(sorted(file.system.rows()), sorted(&expected));
}

#[test]
fn porta_export_converts_back() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let scenario = fixture(d, "zy-scenario", None, "zy.json");
    let run = entropic(d, &["project", "zy.json", "-o", "zy.ineq", "--export", "porta"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let back = entropic(d, &["convert", "zy.ieq", "--to", "text", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(back.code, 0, "{}", back.stderr);
    let original = parse_inequalities(&std::fs::read_to_string(d.join("zy.ineq")).unwrap()).unwrap();
    assert_eq!(parse_inequalities(&back.stdout).unwrap().system, original.system);
    let porta = entropic(d, &["convert", "zy.ineq", "--to", "porta"]);
    assert_eq!(porta.stdout, std::fs::read_to_string(d.join("zy.ieq")).unwrap());
}

#[test]
fn check_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let c3 = facets(d, "cycle-scenario", Some(3), "c3");
    let c3 = c3.to_str().unwrap();
    fixture(d, "triangle-puc", None, "puc.json");
    fixture(d, "trianglebox", None, "box.json");
    let puc = entropic(d, &["--json", "check", "puc.json", c3]);
    assert_eq!(puc.code, 1);
    let report: Value = serde_json::from_str(&puc.stdout).unwrap();
    assert_eq!(report["verdict"], "CONTEXTUAL");
    let bad = report["violations"].as_array().unwrap();
    assert_eq!(bad.len(), 1);
    let k = bad[0].as_u64().unwrap() as usize - 1;
    let value: f64 = report["rows"][k]["value"].as_str().unwrap().parse().unwrap();
    assert!((value + 1.0).abs() < 1e-9);

    let boxed = entropic(d, &["check", "box.json", c3]);
    assert_eq!(boxed.code, 0);
    assert!(boxed.stdout.contains("verdict: PASSES"));
}

#[test]
fn zhang_yeung_fixtures() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let zy_facets = facets(d, "zy-scenario", None, "mzy");
    fixture(d, "fzy", None, "fzy.json");
    fixture(d, "zhang-yeung", None, "zy.ineq");
    assert_eq!(entropic(d, &["check", "fzy.json", zy_facets.to_str().unwrap()]).code, 0);
    let zy = entropic(d, &["check", "fzy.json", "zy.ineq"]);
    assert_eq!(zy.code, 1);
    assert!(zy.stdout.contains("slack -1 "), "{}", zy.stdout);

    let ext = entropic(d, &["--json", "extend", "fzy.json"]);
    assert_eq!(ext.code, 0);
    let report: Value = serde_json::from_str(&ext.stdout).unwrap();
    let full = parse_partial(&report["extension"].to_string()).unwrap();
    let given = parse_partial(&std::fs::read_to_string(d.join("fzy.json")).unwrap()).unwrap();
    for (s, v) in given.vector.iter() {
        assert_eq!(full.vector.get(s), Some(v));
    }
    assert_eq!(full.vector.scenario(), &Scenario::full(4).unwrap());

    let proof = entropic(d, &["prove", "zy.ineq"]);
    assert_eq!(proof.code, 1);
    assert!(proof.stdout.contains("NOT PROVABLE (counterexample verified: true"));
}

#[test]
fn extend_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fixture(d, "triangle-puc", None, "puc.json");
    let puc = entropic(d, &["extend", "puc.json", "--n", "3"]);
    assert_eq!(puc.code, 1);
    assert!(puc.stdout.contains("verdict: INFEASIBLE"));
    std::fs::write(
        d.join("zero.json"),
        r#"{"scenario": {"n": 2, "generators": [["A1", "A2"]]}, "values": {"A1": 0, "A2": 0, "A1A2": 0}}"#,
    )
    .unwrap();
    let zero = entropic(d, &["extend", "zero.json", "--n", "3"]);
    assert_eq!(zero.code, 0, "{}", zero.stderr);
    assert!(zero.stdout.contains("\"A1A2A3\": \"0\""));
}

#[test]
fn marginal_lp_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fixture(d, "trianglebox", None, "box.json");
    fixture(d, "triangle-puc", None, "puc.json");
    fixture(d, "triangle-correlated", None, "eq.json");
    for f in ["box.json", "puc.json"] {
        let run = entropic(d, &["marginal-lp", f]);
        assert_eq!(run.code, 1, "{f}");
        assert!(run.stdout.contains("verdict: CONTEXTUAL (certificate verified: true)"));
    }
    let run = entropic(d, &["--json", "marginal-lp", "eq.json"]);
    assert_eq!(run.code, 0);
    let report: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(report["verified"], true);
    let joint = parse_distribution(&report["joint"].to_string()).unwrap().distribution;
    let entries: Vec<(Vec<u32>, Rational)> = joint.entries().map(|(o, p)| (o.to_vec(), p.clone())).collect();
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(entries, vec![(vec![0, 0, 0], half.clone()), (vec![1, 1, 1], half)]);

    let capped = entropic(d, &["marginal-lp", "box.json", "--cap", "7"]);
    assert_eq!(capped.code, 2);
    assert!(capped.stderr.contains("exceed the cap"));
}

#[test]
fn prover_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fixture(d, "cycle-inequalities", Some(6), "c6.ineq");
    let run = entropic(d, &["prove", "c6.ineq"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.matches("PROVABLE (certificate verified: true)").count(), 6);

    fixture(d, "commoninfo", None, "ci1.ineq");
    fixture(d, "commoninfo2", None, "ci2.ineq");
    fixture(d, "figure-baynet-ci", None, "markov.ci");
    for f in ["ci1.ineq", "ci2.ineq"] {
        assert_eq!(entropic(d, &["prove", f, "--ci", "markov.ci"]).code, 0, "{f}");
        assert_eq!(entropic(d, &["prove", f]).code, 1, "{f}");
    }

    std::fs::write(d.join("empty.ineq"), "# n: 2\nH({}) + H(A1) >= 0\n").unwrap();
    let bad = entropic(d, &["prove", "empty.ineq"]);
    assert_eq!(bad.code, 2, "{}", bad.stdout);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fixture(d, "zy-scenario", None, "zy.json");
    let budget = entropic(d, &["project", "zy.json", "--budget", "20"]);
    assert_eq!(budget.code, 3);
    assert!(budget.stderr.contains("budget exhausted"));

    fixture(d, "triangle-puc", None, "puc.json");
    fixture(d, "zhang-yeung", None, "zy.ineq");
    let mismatch = entropic(d, &["check", "puc.json", "zy.ineq"]);
    assert_eq!(mismatch.code, 2);
    assert!(mismatch.stderr.contains("coordinate mismatch"));

    assert_eq!(entropic(d, &["--tolerance", "0", "check", "puc.json", "zy.ineq"]).code, 2);
    assert_eq!(entropic(d, &["--budget", "0", "project", "zy.json"]).code, 2);
    assert_eq!(entropic(d, &["check", "missing.json", "zy.ineq"]).code, 2);
    assert_eq!(entropic(d, &["fixture", "nonsense"]).code, 2);
    assert_eq!(entropic(d, &["project", "puc.json"]).code, 2);
}

#[test]
fn every_fixture_parses() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let list = entropic(d, &["fixture", "list"]);
    let names: Vec<&str> = list.stdout.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert!(names.len() >= 15);
    for name in names {
        let run = entropic(d, &["fixture", name]);
        assert_eq!(run.code, 0, "{name}");
        let t = &run.stdout;
        let ok = if name.ends_with("-ci") {
            entropic::io::parse_ci(t, &Labels::default_for(6)).is_ok()
        } else if t.starts_with('#') {
            parse_inequalities(t).is_ok()
        } else {
            serde_json::from_str::<Value>(t).is_ok()
        };
        assert!(ok, "{name}");
    }
}

#[test]
fn entropy_of_a_distribution() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("d.json"),
        r#"{"variables": [{"label": "A1", "alphabet": ["0", "1"]}, {"label": "A2", "alphabet": ["0", "1"]}],
            "table": [[["0", "0"], "1/2"], [["1", "1"], "1/2"]]}"#,
    )
    .unwrap();
    let run = entropic(d, &["entropy", "d.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = parse_partial(&run.stdout).unwrap().vector;
    for s in [SubsetIndex::of(&[1]), SubsetIndex::of(&[2]), SubsetIndex::of(&[1, 2])] {
        assert_eq!(v.get(s), Some(&Rational::from_integer(1.into())));
    }
}

/// Extension and the projected facets give the same verdict on every vector fixture.
#[test]
fn extend_agrees_with_check_on_fixtures() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let c3 = facets(d, "cycle-scenario", Some(3), "c3");
    let c4 = facets(d, "cycle-scenario", Some(4), "c4");
    let mzy = facets(d, "zy-scenario", None, "mzy");
    let cases = [
        ("trianglebox", None, &c3),
        ("triangle-puc", None, &c3),
        ("triangle-correlated", None, &c3),
        ("cycle-model", Some(3), &c3),
        ("cycle-model", Some(4), &c4),
        ("fzy", None, &mzy),
        ("realize-zy", None, &mzy),
    ];
    for (name, n, ineq) in cases {
        let input = fixture(d, name, n, "input.json");
        let input = input.to_str().unwrap();
        let check = entropic(d, &["check", input, ineq.to_str().unwrap()]);
        let extend = entropic(d, &["extend", input]);
        assert!(check.code <= 1 && extend.code <= 1, "{name}: {}{}", check.stderr, extend.stderr);
        assert_eq!(check.code, extend.code, "{name} {n:?}");
    }
}

fn alphabet(size: usize) -> Vec<String> {
    (0..size).map(|k| format!("s{k}")).collect()
}

fn joint_strategy(n: usize) -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(1usize..=3, n).prop_flat_map(move |sizes| {
        let count: usize = sizes.iter().product();
        prop::collection::vec(prop_oneof![Just(0u32), 1u32..12], count)
            .prop_filter("some mass", |w| w.iter().any(|x| *x > 0))
            .prop_map(move |w| {
                let total: u32 = w.iter().sum();
                let mut entries = Vec::new();
                for (k, x) in w.iter().enumerate().filter(|(_, x)| **x > 0) {
                    let mut outcome = vec![0u32; n];
                    let mut rest = k;
                    for i in (0..n).rev() {
                        outcome[i] = (rest % sizes[i]) as u32;
                        rest /= sizes[i];
                    }
                    entries.push((outcome, Rational::new((*x).into(), total.into())));
                }
                let alphabets = sizes.iter().map(|s| alphabet(*s)).collect();
                JointDistribution::new(SubsetIndex::full(n), alphabets, entries, true).unwrap()
            })
    })
}

struct Scene {
    dir: TempDir,
    scenario: Scenario,
    facets: PathBuf,
}

fn scene(cell: &'static OnceLock<Scene>, fixture_name: &'static str, n: Option<usize>) -> &'static Scene {
    cell.get_or_init(|| {
        let dir = TempDir::new().unwrap();
        let facets = facets(dir.path(), fixture_name, n, "scene");
        let scenario = entropic::io::parse_scenario(&std::fs::read_to_string(dir.path().join("scene.json")).unwrap())
            .unwrap()
            .scenario;
        Scene { dir, scenario, facets }
    })
}

fn non_contextual_passes(scene: &Scene, joint: &JointDistribution, tag: &str) -> Result<(), TestCaseError> {
    let n = scene.scenario.n();
    let model = MarginalModel::from_joint(scene.scenario.clone(), joint).unwrap();
    let path = scene.dir.path().join(format!("model-{tag}.json"));
    std::fs::write(&path, emit_model(&ModelFile { model, labels: Labels::default_for(n) })).unwrap();
    let p = path.to_str().unwrap();
    let lp = entropic(scene.dir.path(), &["marginal-lp", p]);
    prop_assert_eq!(lp.code, 0);
    let check = entropic(scene.dir.path(), &["check", p, scene.facets.to_str().unwrap()]);
    prop_assert_eq!(check.code, 0, "{}", check.stdout);
    Ok(())
}

static C3: OnceLock<Scene> = OnceLock::new();
static C4: OnceLock<Scene> = OnceLock::new();
static MZY: OnceLock<Scene> = OnceLock::new();

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn non_contextual_models_pass_on_the_triangle(joint in joint_strategy(3)) {
        non_contextual_passes(scene(&C3, "cycle-scenario", Some(3)), &joint, "c3")?;
    }

    #[test]
    fn non_contextual_models_pass_on_the_square(joint in joint_strategy(4)) {
        non_contextual_passes(scene(&C4, "cycle-scenario", Some(4)), &joint, "c4")?;
    }

    #[test]
    fn non_contextual_models_pass_on_the_zhang_yeung_scenario(joint in joint_strategy(4)) {
        non_contextual_passes(scene(&MZY, "zy-scenario", None), &joint, "mzy")?;
    }
}
