use entropic::{Scenario, SubsetIndex};
use proptest::prelude::*;

fn generators(n: usize) -> impl Strategy<Value = Vec<SubsetIndex>> {
    prop::collection::vec(0u32..(1 << n), 0..6)
        .prop_map(|g| g.into_iter().map(SubsetIndex::from_bits).collect())
}

fn check_closed(s: &Scenario) -> Result<(), TestCaseError> {
    for &m in s.members() {
        for sub in m.subsets() {
            prop_assert!(s.contains(sub), "{:?} missing below {:?}", sub, m);
        }
    }
    prop_assert!(s.contains(SubsetIndex::EMPTY));
    Ok(())
}

proptest! {
    #[test]
    fn downward_close_invariants(n in 1usize..=6, g in (1usize..=6).prop_flat_map(generators)) {
        let g: Vec<SubsetIndex> = g.into_iter().filter(|s| s.max_element() <= n).collect();
        let s = Scenario::downward_close(&g, n).unwrap();
        check_closed(&s)?;
        for gen in s.generators() {
            prop_assert!(g.contains(gen) || (gen.is_empty() && g.iter().all(|s| s.is_empty())));
        }
        for m in s.members() {
            prop_assert!(s.generators().iter().any(|gen| m.is_subset_of(*gen)));
        }
        let again = Scenario::downward_close(s.members(), n).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn members_are_canonically_ordered(n in 1usize..=6, g in (1usize..=6).prop_flat_map(generators)) {
        let g: Vec<SubsetIndex> = g.into_iter().filter(|s| s.max_element() <= n).collect();
        let s = Scenario::downward_close(&g, n).unwrap();
        prop_assert!(s.members().windows(2).all(|w| w[0] < w[1]));
        for w in s.members().windows(2) {
            prop_assert!(w[0].len() <= w[1].len());
        }
    }
}

#[test]
fn named_scenarios_are_closed() {
    for n in 3..=6 {
        check_closed(&Scenario::cycle(n).unwrap()).unwrap();
        check_closed(&Scenario::full(n).unwrap()).unwrap();
        assert_eq!(Scenario::cycle(n).unwrap().nonempty_members().len(), 2 * n);
    }
    let zy = Scenario::zhang_yeung();
    check_closed(&zy).unwrap();
    assert_eq!(zy.generators().len(), 3);
    assert_eq!(zy.nonempty_members().len(), 12);
}
