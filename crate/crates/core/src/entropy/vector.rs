use crate::error::{Error, Result};
use crate::polyhedra::{LinearInequality, RankValue};
use crate::sets::{Scenario, SubsetIndex};

/// Largest ground set a dense rank vector is built for.
pub const MAX_DENSE_N: usize = 24;

/// A set function on all subsets of `[n]` with `f(∅) = 0`, indexed by subset bits.
#[derive(Clone, Debug, PartialEq)]
pub struct RankVector<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: RankValue> RankVector<T> {
    /// `values[bits]` is `f` at the subset with that bitmask.
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        if n > MAX_DENSE_N || values.len() != 1 << n {
            return Err(Error::domain(format!(
                "rank vector on [{n}] needs 2^{n} values, got {}",
                values.len()
            )));
        }
        if !values[0].near_zero(0.0) {
            return Err(Error::domain("rank vector must vanish on the empty set"));
        }
        Ok(RankVector { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(SubsetIndex) -> T) -> Result<Self> {
        let values = (0..1u32 << n).map(|b| f(SubsetIndex::from_bits(b))).collect();
        Self::new(n, values)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_fn(n, |_| T::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Panics when `s` is not a subset of `[n]`.
    pub fn get(&self, s: SubsetIndex) -> &T {
        &self.values[s.bits() as usize]
    }

    pub fn try_get(&self, s: SubsetIndex) -> Option<&T> {
        self.values.get(s.bits() as usize)
    }

    /// Entries in canonical subset order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetIndex, &T)> + '_ {
        SubsetIndex::all(self.n).into_iter().map(|s| (s, self.get(s)))
    }

    pub fn restrict(&self, scenario: &Scenario) -> Result<PartialRankVector<T>> {
        if scenario.n() > self.n {
            return Err(Error::domain("scenario ground set exceeds the rank vector's"));
        }
        PartialRankVector::from_fn(scenario.clone(), |s| self.get(s).clone())
    }

    pub fn evaluate(&self, row: &LinearInequality) -> Option<T> {
        row.evaluate(|s| self.try_get(s).cloned())
    }
}

/// A set function on the members of a scenario with `f(∅) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialRankVector<T> {
    scenario: Scenario,
    values: Vec<T>,
}

impl<T: RankValue> PartialRankVector<T> {
    /// `values` follows `scenario.members()`.
    pub fn new(scenario: Scenario, values: Vec<T>) -> Result<Self> {
        if values.len() != scenario.len() {
            return Err(Error::domain(format!(
                "scenario has {} members, got {} values",
                scenario.len(),
                values.len()
            )));
        }
        if !values[0].near_zero(0.0) {
            return Err(Error::domain("partial rank vector must vanish on the empty set"));
        }
        Ok(PartialRankVector { scenario, values })
    }

    pub fn from_fn(scenario: Scenario, f: impl Fn(SubsetIndex) -> T) -> Result<Self> {
        let values = scenario.members().iter().map(|&s| f(s)).collect();
        Self::new(scenario, values)
    }

    pub fn zero(scenario: Scenario) -> Result<Self> {
        Self::from_fn(scenario, |_| T::zero())
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn get(&self, s: SubsetIndex) -> Option<&T> {
        self.scenario.position(s).map(|i| &self.values[i])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetIndex, &T)> + '_ {
        self.scenario.members().iter().copied().zip(&self.values)
    }

    /// `None` when the row mentions a subset outside the scenario.
    pub fn evaluate(&self, row: &LinearInequality) -> Option<T> {
        row.evaluate(|s| self.get(s).cloned())
    }

    pub fn map<U: RankValue>(&self, f: impl Fn(&T) -> U) -> PartialRankVector<U> {
        PartialRankVector {
            scenario: self.scenario.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// Monotonicity and submodularity wherever expressible inside the scenario: the first
/// violated condition, if any, as `(S, T)` with `S ⊆ T` for monotonicity or an
/// arbitrary pair for submodularity.
pub fn partial_polymatroid_violation<T: RankValue>(
    v: &PartialRankVector<T>,
    tolerance: f64,
) -> Option<PolymatroidViolation> {
    let members = v.scenario().members();
    let val = |s: SubsetIndex| v.get(s).expect("member").clone();
    for &t in members {
        for &s in members {
            if s.is_proper_subset_of(t) {
                let d = val(t).add_scaled(-1, &val(s));
                if d.below(tolerance) {
                    return Some(PolymatroidViolation::Monotonicity { smaller: s, larger: t });
                }
            }
        }
    }
    for (i, &s) in members.iter().enumerate() {
        for &t in &members[i + 1..] {
            let u = s.union(t);
            if !v.scenario().contains(u) || s.is_subset_of(t) || t.is_subset_of(s) {
                continue;
            }
            let d = val(s)
                .add_scaled(1, &val(t))
                .add_scaled(-1, &val(u))
                .add_scaled(-1, &val(s.intersection(t)));
            if d.below(tolerance) {
                return Some(PolymatroidViolation::Submodularity { s, t });
            }
        }
    }
    None
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PolymatroidViolation {
    Monotonicity { smaller: SubsetIndex, larger: SubsetIndex },
    Submodularity { s: SubsetIndex, t: SubsetIndex },
}

impl std::fmt::Display for PolymatroidViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolymatroidViolation::Monotonicity { smaller, larger } => {
                write!(f, "f({larger:?}) >= f({smaller:?})")
            }
            PolymatroidViolation::Submodularity { s, t } => write!(
                f,
                "f({s:?}) + f({t:?}) >= f({:?}) + f({:?})",
                s.union(*t),
                s.intersection(*t)
            ),
        }
    }
}
