#![allow(dead_code)]

use entropic::entropy::JointDistribution;
use entropic::polyhedra::Rational;
use entropic::SubsetIndex;
use proptest::prelude::*;
use rand::Rng;

/// Symbols `s0`, `s1`, ...
pub fn alphabet(size: usize) -> Vec<String> {
    (0..size).map(|k| format!("s{k}")).collect()
}

/// Joint distribution over `[n]` from integer weights, one per outcome in
/// lexicographic order. At least one weight must be positive.
pub fn joint_from_weights(n: usize, sizes: &[usize], weights: &[u32]) -> JointDistribution {
    let total: u64 = weights.iter().map(|w| *w as u64).sum();
    assert!(total > 0);
    let mut entries = Vec::new();
    let mut outcome = vec![0u32; n];
    for w in weights {
        if *w > 0 {
            entries.push((outcome.clone(), Rational::new((*w).into(), total.into())));
        }
        for i in (0..n).rev() {
            outcome[i] += 1;
            if (outcome[i] as usize) < sizes[i] {
                break;
            }
            outcome[i] = 0;
        }
    }
    let alphabets = sizes.iter().map(|s| alphabet(*s)).collect();
    JointDistribution::new(SubsetIndex::full(n), alphabets, entries, true).unwrap()
}

/// Random joint over `[n]` with alphabets of size `1..=max_alphabet` and sparse integer
/// weights.
pub fn joint_strategy(n: usize, max_alphabet: usize) -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(1..=max_alphabet, n).prop_flat_map(move |sizes| {
        let count: usize = sizes.iter().product();
        prop::collection::vec(prop_oneof![2 => Just(0u32), 3 => 1u32..20], count)
            .prop_filter("some mass", |w| w.iter().any(|x| *x > 0))
            .prop_map(move |w| joint_from_weights(n, &sizes, &w))
    })
}

pub fn random_joint(rng: &mut impl Rng, n: usize, max_alphabet: usize) -> JointDistribution {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_alphabet)).collect();
    let count: usize = sizes.iter().product();
    loop {
        let w: Vec<u32> = (0..count)
            .map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(1..20) })
            .collect();
        if w.iter().any(|x| *x > 0) {
            return joint_from_weights(n, &sizes, &w);
        }
    }
}
