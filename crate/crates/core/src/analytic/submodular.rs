use crate::entropy::{PartialRankVector, RankVector, MAX_DENSE_N};
use crate::error::{Error, Result};
use crate::polyhedra::Rational;
use crate::sets::SubsetIndex;

/// First pair `(S, T)` of members with `S ∪ T` a member and
/// `f(S ∪ T) + f(S ∩ T) > f(S) + f(T)`.
pub fn submodular_violation(v: &PartialRankVector<Rational>) -> Option<(SubsetIndex, SubsetIndex)> {
    let members = v.scenario().members();
    let f = |s: SubsetIndex| v.get(s).expect("member");
    for (i, &s) in members.iter().enumerate() {
        for &t in &members[i + 1..] {
            let u = s.union(t);
            if !v.scenario().contains(u) || s.is_subset_of(t) || t.is_subset_of(s) {
                continue;
            }
            if f(u) + f(s.intersection(t)) > f(s) + f(t) {
                return Some((s, t));
            }
        }
    }
    None
}

/// Extends a submodular function on a scenario to all of `2^[n]`.
///
/// Missing sets are filled in canonical order, so every proper subset of the next set
/// is already known; its value is the least `f(S) + f(T) − f(S ∩ T)` over proper subsets
/// with `S ∪ T = V`. A missing singleton has no such pair and gets 0.
pub fn submodular_extend(v: &PartialRankVector<Rational>) -> Result<RankVector<Rational>> {
    let n = v.scenario().n();
    if n > MAX_DENSE_N {
        return Err(Error::domain(format!("ground set {n} too large to extend densely")));
    }
    if let Some((s, t)) = submodular_violation(v) {
        return Err(Error::domain(format!(
            "not submodular: f({:?}) + f({:?}) > f({s:?}) + f({t:?})",
            s.union(t),
            s.intersection(t)
        )));
    }
    let mut values: Vec<Option<Rational>> = vec![None; 1 << n];
    for (s, x) in v.iter() {
        values[s.bits() as usize] = Some(x.clone());
    }
    for target in SubsetIndex::all(n) {
        if values[target.bits() as usize].is_some() {
            continue;
        }
        let get = |s: SubsetIndex| values[s.bits() as usize].as_ref().expect("filled earlier");
        let mut best: Option<Rational> = None;
        for s in target.subsets().filter(|s| *s != target) {
            // T ranges over proper subsets of V containing V \ S; each pair is seen twice
            let rest = target.difference(s);
            for extra in s.subsets() {
                let t = rest.union(extra);
                if t == target {
                    continue;
                }
                let c = get(s) + get(t) - get(s.intersection(t));
                if best.as_ref().map_or(true, |b| c < *b) {
                    best = Some(c);
                }
            }
        }
        values[target.bits() as usize] = Some(best.unwrap_or_else(|| Rational::from_integer(0.into())));
    }
    RankVector::new(n, values.into_iter().map(|x| x.expect("all filled")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational;
    use crate::sets::Scenario;

    #[test]
    fn zero_extends_to_zero() {
        let v = PartialRankVector::<Rational>::zero(Scenario::cycle(4).unwrap()).unwrap();
        let f = submodular_extend(&v).unwrap();
        assert!(f.iter().all(|(_, x)| *x == rational(0)));
    }

    #[test]
    fn independent_bits_on_triangle() {
        let v = PartialRankVector::from_fn(Scenario::cycle(3).unwrap(), |s| rational(s.len() as i64))
            .unwrap();
        let f = submodular_extend(&v).unwrap();
        assert_eq!(*f.get(SubsetIndex::of(&[1, 2, 3])), rational(3));
    }

    #[test]
    fn rejects_supermodular_input() {
        let v = PartialRankVector::from_fn(Scenario::full(2).unwrap(), |s| {
            if s.len() == 2 { rational(3) } else { rational(s.len() as i64) }
        })
        .unwrap();
        assert!(submodular_extend(&v).is_err());
    }
}
