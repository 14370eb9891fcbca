mod common;

use entropic::analytic::{
    figure_baynet, figure_baynet_listed_constraints, fzy_fixture, realize_zy_model, trianglebox,
    FIGURE_BAYNET_OBSERVED,
};
use entropic::cones::{elemental_system, project_cone, CIConstraint};
use entropic::entropy::{marginal_entropy_vector, MarginalModel, PartialRankVector};
use entropic::io::{
    emit_bayes_net, emit_ci, emit_distribution, emit_inequalities, emit_model, emit_partial,
    emit_partial_f64, emit_porta, emit_scenario, parse_bayes_net, parse_ci, parse_distribution,
    parse_inequalities, parse_model, parse_partial, parse_porta, parse_scenario, BayesNetFile,
    DistributionFile, InequalityFile, Labels, ModelFile, ScenarioFile,
};
use entropic::polyhedra::{InequalitySystem, LinearInequality, Rational, Sense};
use entropic::{Scenario, SubsetIndex};
use proptest::prelude::*;

fn labels_strategy(n: usize) -> impl Strategy<Value = Labels> {
    prop_oneof![
        Just(Labels::default_for(n)),
        prop::collection::btree_set("[a-z][a-z0-9_]{0,3}", n).prop_filter_map("distinct", move |names| {
            let names: Vec<String> = names.into_iter().collect();
            (names.len() == n).then(|| Labels::new(names).unwrap())
        }),
    ]
}

fn system_strategy(n: usize) -> impl Strategy<Value = InequalitySystem> {
    let coords: Vec<SubsetIndex> = SubsetIndex::all(n).into_iter().filter(|s| !s.is_empty()).collect();
    let k = coords.len();
    let row = (prop::collection::vec((0..k, -5i64..=5), 1..5), prop::bool::weighted(0.2));
    prop::collection::vec(row, 0..8).prop_map(move |rows| {
        let rows = rows
            .into_iter()
            .filter_map(|(terms, eq)| {
                let terms = terms.into_iter().map(|(i, c)| (coords[i], c));
                let r = LinearInequality::new(terms, if eq { Sense::Equal } else { Sense::GreaterEq }).unwrap();
                (!r.is_trivial()).then_some(r)
            })
            .collect();
        InequalitySystem::new(n, coords.clone(), rows).unwrap()
    })
}

fn scenario_strategy(n: usize) -> impl Strategy<Value = Scenario> {
    prop::collection::vec(1u32..(1 << n), 1..4).prop_map(move |g| {
        let g: Vec<SubsetIndex> = g.into_iter().map(SubsetIndex::from_bits).collect();
        Scenario::downward_close(&g, n).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inequality_files_round_trip(
        (sys, labels) in (1usize..=4).prop_flat_map(|n| (system_strategy(n), labels_strategy(n))),
        source in prop::option::of("[ -~]{0,20}"),
    ) {
        let source = source.map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
        let file = InequalityFile { system: sys, labels, source };
        let text = emit_inequalities(&file);
        prop_assert_eq!(parse_inequalities(&text).unwrap(), file);
    }

    #[test]
    fn porta_round_trip(sys in (1usize..=4).prop_flat_map(system_strategy)) {
        let text = emit_porta(&sys);
        prop_assert_eq!(parse_porta(&text, sys.n(), sys.coordinates()).unwrap(), sys);
    }

    #[test]
    fn scenario_files_round_trip(
        (scenario, labels) in (1usize..=6).prop_flat_map(|n| (scenario_strategy(n), labels_strategy(n))),
    ) {
        let file = ScenarioFile { scenario, labels };
        prop_assert_eq!(parse_scenario(&emit_scenario(&file)).unwrap(), file);
    }

    #[test]
    fn model_and_distribution_files_round_trip(
        (d, scenario, labels) in (1usize..=4).prop_flat_map(|n| (common::joint_strategy(n, 3), scenario_strategy(n), labels_strategy(n))),
    ) {
        let dist = DistributionFile { distribution: d.clone(), labels: labels.clone() };
        prop_assert_eq!(parse_distribution(&emit_distribution(&dist)).unwrap(), dist);
        let model = MarginalModel::from_joint(scenario, &d).unwrap();
        let file = ModelFile { model, labels };
        prop_assert_eq!(parse_model(&emit_model(&file)).unwrap(), file);
    }

    #[test]
    fn partial_vector_files_round_trip(
        (scenario, labels) in (1usize..=5).prop_flat_map(|n| (scenario_strategy(n), labels_strategy(n))),
        seed in prop::collection::vec((-50i64..50, 1i64..7), 32),
    ) {
        let v = PartialRankVector::from_fn(scenario.clone(), |m| {
            if m.is_empty() {
                return Rational::from_integer(0.into());
            }
            let (p, q) = seed[m.bits() as usize % seed.len()];
            Rational::new(p.into(), q.into())
        }).unwrap();
        let f = parse_partial(&emit_partial(&v, &labels)).unwrap();
        prop_assert!(f.exact);
        prop_assert_eq!(f.vector, v.clone());
        prop_assert_eq!(f.labels, labels.clone());

        let h = v.map(|x| entropic::polyhedra::RankValue::to_f64(x) / 3.0);
        let g = parse_partial(&emit_partial_f64(&h, &labels)).unwrap();
        prop_assert!(!g.exact || h.iter().all(|(_, x)| x.fract() == 0.0));
        for (m, x) in h.iter() {
            prop_assert_eq!(entropic::polyhedra::RankValue::to_f64(g.vector.get(m).unwrap()), *x);
        }
    }

    #[test]
    fn ci_files_round_trip(
        (triples, labels) in (3usize..=6).prop_flat_map(|n| (
            prop::collection::vec((0u32..(1 << n), 0u32..(1 << n), 0u32..(1 << n)), 0..6),
            labels_strategy(n),
        )),
    ) {
        let constraints: Vec<CIConstraint> = triples
            .into_iter()
            .filter_map(|(a, b, c)| {
                let (a, b, c) = (SubsetIndex::from_bits(a), SubsetIndex::from_bits(b), SubsetIndex::from_bits(c));
                let b = b.difference(a);
                let c = c.difference(a.union(b));
                CIConstraint::new(a, b, c).ok()
            })
            .collect();
        prop_assert_eq!(parse_ci(&emit_ci(&constraints, &labels), &labels).unwrap(), constraints);
    }

    #[test]
    fn parsers_reject_garbage_without_panicking(text in "\\PC{0,200}") {
        let l = Labels::default_for(4);
        let _ = parse_inequalities(&text);
        let _ = parse_porta(&text, 2, &[SubsetIndex::of(&[1]), SubsetIndex::of(&[2])]);
        let _ = parse_ci(&text, &l);
        let _ = parse_scenario(&text);
        let _ = parse_distribution(&text);
        let _ = parse_model(&text);
        let _ = parse_partial(&text);
        let _ = parse_bayes_net(&text);
    }
}

#[test]
fn fixtures_round_trip() {
    for model in [trianglebox(), realize_zy_model()] {
        let n = model.scenario().n();
        let file = ModelFile { model, labels: Labels::default_for(n) };
        assert_eq!(parse_model(&emit_model(&file)).unwrap(), file);
    }
    let zy = fzy_fixture();
    let labels = Labels::default_for(4);
    assert_eq!(parse_partial(&emit_partial(&zy, &labels)).unwrap().vector, zy);

    let net = BayesNetFile {
        net: figure_baynet(),
        labels: Labels::default_for(6),
        observed: SubsetIndex::of(&FIGURE_BAYNET_OBSERVED),
    };
    assert_eq!(parse_bayes_net(&emit_bayes_net(&net)).unwrap(), net);
    let listed = figure_baynet_listed_constraints();
    assert_eq!(parse_ci(&emit_ci(&listed, &net.labels), &net.labels).unwrap(), listed);
}

#[test]
fn projected_files_round_trip() {
    for sys in [elemental_system(3).unwrap(), project_cone(4, &Scenario::zhang_yeung(), &[]).unwrap()] {
        let file = InequalityFile::new(sys.clone());
        assert_eq!(parse_inequalities(&emit_inequalities(&file)).unwrap().system, sys);
        assert_eq!(parse_porta(&emit_porta(&sys), sys.n(), sys.coordinates()).unwrap(), sys);
    }
}

#[test]
fn decimal_entropies_are_flagged_inexact() {
    let h = marginal_entropy_vector(&trianglebox()).unwrap();
    let text = emit_partial_f64(&h, &Labels::default_for(3));
    let f = parse_partial(&text).unwrap();
    assert!(!f.exact);
    assert_eq!(f.vector.scenario(), h.scenario());
}

#[test]
fn hand_written_inequalities() {
    assert!(parse_inequalities("H(A1) >= 2\n").is_err());
    let text = "# n: 3\nH(A1A2) + H(A2A3) >= H(A1A3) + H(A2)\n0 <= 2 H(A1)\n";
    let f = parse_inequalities(text).unwrap();
    assert_eq!(f.system.n(), 3);
    assert_eq!(f.system.len(), 2);
    assert_eq!(f.system.rows()[1], LinearInequality::ge([(SubsetIndex::of(&[1]), 1)]));
}
