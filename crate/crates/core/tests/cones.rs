use entropic::analytic::{
    commoninfo, commoninfo2, figure_baynet, figure_baynet_listed_constraints, zhang_yeung,
};
use entropic::cones::{
    elemental_system, extend_partial, local_markov_constraints, project_cone, prove_all,
    prove_shannon, CIConstraint, Extension,
};
use entropic::entropy::PartialRankVector;
use entropic::polyhedra::{InequalitySystem, LinearInequality, Rational, Sense};
use entropic::{Scenario, SubsetIndex};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(e: &[usize]) -> SubsetIndex {
    SubsetIndex::of(e)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn satisfies(system: &InequalitySystem, v: &PartialRankVector<Rational>) -> bool {
    system.rows().iter().all(|r| {
        let x = v.evaluate(r).expect("rows live on the scenario");
        match r.sense() {
            Sense::GreaterEq => !x.is_negative(),
            Sense::Equal => x.is_zero(),
        }
    })
}

/// Restriction of a random sum of rank functions `S ↦ [S ∩ A ≠ ∅]`, optionally
/// perturbed so that roughly half the samples leave the projected cone.
fn random_partial(rng: &mut ChaCha8Rng, n: usize, scenario: &Scenario) -> PartialRankVector<Rational> {
    let blocks: Vec<(u32, i64)> = (0..rng.gen_range(1..=4))
        .map(|_| (rng.gen_range(1..1u32 << n), rng.gen_range(1..=3)))
        .collect();
    let perturb = rng.gen_bool(0.6);
    let noise: Vec<i64> = scenario
        .members()
        .iter()
        .map(|m| if perturb && !m.is_empty() && rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 })
        .collect();
    PartialRankVector::from_fn(scenario.clone(), |m| {
        if m.is_empty() {
            return Rational::zero();
        }
        let base: i64 = blocks.iter().filter(|(a, _)| m.bits() & a != 0).map(|(_, w)| w).sum();
        let k = scenario.position(m).unwrap();
        Rational::new((2 * base + noise[k]).into(), 2.into())
    })
    .unwrap()
}

fn check_duality(n: usize, scenario: &Scenario, constraints: &[CIConstraint], seed: u64) {
    let facets = project_cone(n, scenario, constraints).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inside, mut outside) = (0, 0);
    for _ in 0..120 {
        let v = random_partial(&mut rng, n, scenario);
        let sat = satisfies(&facets, &v);
        match extend_partial(&v, n, constraints).unwrap() {
            Extension::Feasible(full) => {
                assert!(sat, "extendable vector violates a facet");
                for (m, x) in v.iter() {
                    assert_eq!(full.get(m), x);
                }
                let sys = entropic::cones::constrained_cone(n, constraints).unwrap();
                for row in sys.rows() {
                    let y = full.evaluate(row).unwrap();
                    assert!(if row.is_equality() { y.is_zero() } else { !y.is_negative() });
                }
                inside += 1;
            }
            Extension::Infeasible { violated } => {
                assert!(!sat, "facet-satisfying vector is not extendable");
                assert!(v.evaluate(&violated).unwrap().is_negative());
                assert!(prove_shannon(&violated, n, constraints).unwrap().is_provable());
                outside += 1;
            }
        }
    }
    assert!(inside > 10 && outside > 10, "{inside} inside, {outside} outside");
}

#[test]
fn elemental_row_counts() {
    for n in 1..=8 {
        let pairs = if n >= 2 { binom(n, 2) << (n - 2) } else { 0 };
        let expected = n + pairs + 1;
        assert_eq!(elemental_system(n).unwrap().len(), expected, "n = {n}");
    }
}

#[test]
fn duality_on_triangle() {
    check_duality(3, &Scenario::cycle(3).unwrap(), &[], 1);
}

#[test]
fn duality_on_four_cycle() {
    check_duality(4, &Scenario::cycle(4).unwrap(), &[], 2);
}

#[test]
fn duality_on_zhang_yeung_scenario() {
    check_duality(4, &Scenario::zhang_yeung(), &[], 3);
}

#[test]
fn duality_on_a_ci_face() {
    let c = [CIConstraint::new(s(&[1]), s(&[3]), s(&[2])).unwrap()];
    check_duality(3, &Scenario::cycle(3).unwrap(), &c, 4);
}

#[test]
fn projected_rows_are_provable() {
    for (n, sc) in [(3, Scenario::cycle(3).unwrap()), (4, Scenario::zhang_yeung())] {
        let facets = project_cone(n, &sc, &[]).unwrap();
        let verdicts = prove_all(facets.rows(), n, &[]).unwrap();
        for (row, v) in facets.rows().iter().zip(&verdicts) {
            assert!(v.is_provable(), "{row}");
            assert!(v.verify(row, n, &[]));
        }
    }
}

#[test]
fn prover_certificates_verify_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut yes, mut no) = (0, 0);
    for trial in 0..120 {
        let n = 3 + trial % 2;
        let subsets: Vec<SubsetIndex> = SubsetIndex::all(n).into_iter().filter(|s| !s.is_empty()).collect();
        let terms: Vec<(SubsetIndex, i64)> = (0..rng.gen_range(2..6))
            .map(|_| (subsets[rng.gen_range(0..subsets.len())], rng.gen_range(-2..=3)))
            .collect();
        let candidate = LinearInequality::ge(terms);
        if candidate.is_trivial() {
            continue;
        }
        let verdict = prove_shannon(&candidate, n, &[]).unwrap();
        assert!(verdict.verify(&candidate, n, &[]), "{candidate}");
        if verdict.is_provable() {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 5 && no > 5, "{yes} provable, {no} not");
}

#[test]
fn zhang_yeung_is_not_shannon() {
    let zy = zhang_yeung();
    let verdict = prove_shannon(&zy, 4, &[]).unwrap();
    assert!(!verdict.is_provable());
    assert!(verdict.verify(&zy, 4, &[]));
}

#[test]
fn empty_set_coefficient_is_rejected() {
    let bad = LinearInequality::ge([(SubsetIndex::EMPTY, 1), (s(&[1]), 1)]);
    assert!(prove_shannon(&bad, 2, &[]).is_err());
}

#[test]
fn independence_face_gives_additivity() {
    let c = [CIConstraint::new(s(&[1]), s(&[2]), SubsetIndex::EMPTY).unwrap()];
    let additive = LinearInequality::eq([(s(&[1, 2]), 1), (s(&[1]), -1), (s(&[2]), -1)]);
    assert!(prove_shannon(&additive, 2, &c).unwrap().is_provable());
    assert!(!prove_shannon(&additive, 2, &[]).unwrap().is_provable());
}

#[test]
fn common_information_needs_the_full_markov_conditions() {
    let markov = local_markov_constraints(&figure_baynet());
    let listed = figure_baynet_listed_constraints();
    for candidate in [commoninfo(), commoninfo2()] {
        let verdict = prove_shannon(&candidate, 6, &markov).unwrap();
        assert!(verdict.is_provable(), "{candidate}");
        assert!(verdict.verify(&candidate, 6, &markov));
        // the six pairwise consequences alone leave room for a counterexample
        let weaker = prove_shannon(&candidate, 6, &listed).unwrap();
        assert!(!weaker.is_provable(), "{candidate}");
        assert!(weaker.verify(&candidate, 6, &listed));
        assert!(!prove_shannon(&candidate, 6, &[]).unwrap().is_provable());
    }
}

#[test]
fn zero_vector_extends() {
    let v = PartialRankVector::zero(Scenario::zhang_yeung()).unwrap();
    match extend_partial(&v, 4, &[]).unwrap() {
        Extension::Feasible(full) => assert!(full.iter().all(|(_, x)| x.is_zero())),
        Extension::Infeasible { .. } => panic!("zero vector must extend"),
    }
}
