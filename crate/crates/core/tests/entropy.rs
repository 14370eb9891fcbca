mod common;

use common::{joint_from_weights, joint_strategy};
use entropic::cones::elemental_system;
use entropic::entropy::{
    check_compatibility, marginal_entropy_vector, marginal_lp, partial_polymatroid_violation,
    verify_marginal_lp, MarginalLpVerdict, MarginalModel, DEFAULT_OUTCOME_CAP,
};
use entropic::polyhedra::Sense;
use entropic::{Scenario, SubsetIndex};
use proptest::prelude::*;

/// Entropy in bits of a probability list, computed directly.
fn plain_entropy(ps: &[f64]) -> f64 {
    ps.iter().filter(|p| **p > 0.0).map(|p| -p * p.log2()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn entropy_vectors_are_polymatroids(n in 1usize..=4, seed in any::<u64>()) {
        let d = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            common::random_joint(&mut rng, n, 4)
        };
        let h = d.entropy_vector().unwrap();
        let sys = elemental_system(n).unwrap();
        for row in sys.rows() {
            let v = h.evaluate(row).unwrap();
            match row.sense() {
                Sense::GreaterEq => prop_assert!(v >= -1e-9, "{} = {}", row, v),
                Sense::Equal => prop_assert!(v.abs() <= 1e-9),
            }
        }
        for s in SubsetIndex::all(n) {
            for t in SubsetIndex::all(n) {
                if s.is_subset_of(t) {
                    prop_assert!(h.get(s) <= &(h.get(t) + 1e-9));
                }
            }
        }
    }

    #[test]
    fn marginalization_commutes(d in joint_strategy(4, 3), s in 0u32..16, t in 0u32..16) {
        let (s, t) = (SubsetIndex::from_bits(s | t), SubsetIndex::from_bits(t));
        let direct = d.marginalize(t).unwrap();
        let chained = d.marginalize(s).unwrap().marginalize(t).unwrap();
        prop_assert_eq!(direct, chained);
    }

    #[test]
    fn entropy_matches_direct_sum(d in joint_strategy(3, 4)) {
        let ps: Vec<f64> = d.entries().map(|(_, p)| entropic::polyhedra::RankValue::to_f64(p)).collect();
        prop_assert!((d.shannon_entropy() - plain_entropy(&ps)).abs() < 1e-12);
    }

    #[test]
    fn marginal_entropies_are_partial_polymatroids(d in joint_strategy(4, 3)) {
        for sc in [Scenario::cycle(4).unwrap(), Scenario::zhang_yeung()] {
            let m = MarginalModel::from_joint(sc, &d).unwrap();
            prop_assert!(check_compatibility(&m).is_compatible());
            let h = marginal_entropy_vector(&m).unwrap();
            prop_assert_eq!(partial_polymatroid_violation(&h, 1e-9), None);
        }
    }

    #[test]
    fn marginals_of_a_joint_are_non_contextual(d in joint_strategy(3, 2)) {
        let m = MarginalModel::from_joint(Scenario::cycle(3).unwrap(), &d).unwrap();
        let verdict = marginal_lp(&m, DEFAULT_OUTCOME_CAP).unwrap();
        prop_assert!(verify_marginal_lp(&m, &verdict));
        let non_contextual = matches!(verdict, MarginalLpVerdict::NonContextual { .. });
        prop_assert!(non_contextual);
    }
}

#[test]
fn uniform_bits() {
    let d = joint_from_weights(2, &[2, 2], &[1, 1, 1, 1]);
    let h = d.entropy_vector().unwrap();
    assert_eq!(*h.get(SubsetIndex::of(&[1])), 1.0);
    assert_eq!(*h.get(SubsetIndex::of(&[1, 2])), 2.0);
    assert_eq!(d.mutual_information(SubsetIndex::of(&[1]), SubsetIndex::of(&[2]), SubsetIndex::EMPTY).unwrap(), 0.0);
}

#[test]
fn deterministic_variable_has_zero_entropy() {
    let d = joint_from_weights(2, &[1, 3], &[1, 2, 0]);
    let h = d.entropy_vector().unwrap();
    assert_eq!(*h.get(SubsetIndex::of(&[1])), 0.0);
    assert!((h.get(SubsetIndex::of(&[2])) - plain_entropy(&[1.0 / 3.0, 2.0 / 3.0])).abs() < 1e-15);
}
