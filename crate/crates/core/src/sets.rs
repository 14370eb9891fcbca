//! Subsets of a ground set `[n] = {1, ..., n}` and marginal scenarios
//! (downward-closed families of subsets, i.e. abstract simplicial complexes).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the ground-set size. Coordinate vectors have `2^n` entries.
pub const DEFAULT_MAX_N: usize = 16;

/// Hard limit imposed by the `u32` bit encoding.
pub const ENCODING_MAX_N: usize = 32;

/// A subset of `[n]`, stored as a bitmask where bit `i - 1` marks element `i`.
///
/// The `Ord` implementation is the canonical coordinate order: by cardinality,
/// then lexicographically on the sorted element lists. `{1} < {2} < {1,2} < {1,3}`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    /// Builds a subset from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > ENCODING_MAX_N {
                return Err(Error::domain(format!(
                    "element {e} outside 1..={ENCODING_MAX_N}"
                )));
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetIndex(bits))
    }

    /// Like [`from_elements`](Self::from_elements) for literals known to be valid.
    ///
    /// Panics on an element outside `1..=32`.
    pub fn of(elements: &[usize]) -> Self {
        Self::from_elements(elements.iter().copied()).expect("valid subset literal")
    }

    pub fn singleton(i: usize) -> Self {
        Self::of(&[i])
    }

    pub const fn from_bits(bits: u32) -> Self {
        SubsetIndex(bits)
    }

    /// The full set `[n]`.
    pub fn full(n: usize) -> Self {
        assert!(n <= ENCODING_MAX_N);
        if n == ENCODING_MAX_N {
            SubsetIndex(u32::MAX)
        } else {
            SubsetIndex((1u32 << n) - 1)
        }
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= ENCODING_MAX_N && self.0 & (1 << (i - 1)) != 0
    }

    pub const fn is_subset_of(self, other: SubsetIndex) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_proper_subset_of(self, other: SubsetIndex) -> bool {
        self.is_subset_of(other) && self.0 != other.0
    }

    pub const fn union(self, other: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.0 | other.0)
    }

    pub const fn intersection(self, other: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.0 & other.0)
    }

    pub const fn difference(self, other: SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.0 & !other.0)
    }

    pub const fn is_disjoint(self, other: SubsetIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(self, i: usize) -> SubsetIndex {
        self.union(SubsetIndex::singleton(i))
    }

    pub fn without(self, i: usize) -> SubsetIndex {
        self.difference(SubsetIndex::singleton(i))
    }

    /// Largest element, or 0 for the empty set.
    pub const fn max_element(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Elements in ascending order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self`, including `∅` and `self`, in bit order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetIndex> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(SubsetIndex(cur))
        })
    }

    /// Every subset of `[n]` in canonical order.
    pub fn all(n: usize) -> Vec<SubsetIndex> {
        let mut v: Vec<_> = SubsetIndex::full(n).subsets().collect();
        v.sort();
        v
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz as usize + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

impl Ord for SubsetIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.elements().cmp(other.elements()))
    }
}

impl PartialOrd for SubsetIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// A marginal scenario on `[n]`: a non-empty downward-closed family of subsets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scenario {
    n: usize,
    /// Canonically sorted; always contains `∅`.
    members: Vec<SubsetIndex>,
    /// Maximal members, canonically sorted.
    generators: Vec<SubsetIndex>,
}

impl Scenario {
    /// Smallest downward-closed family on `[n]` containing every generator.
    pub fn downward_close(generators: &[SubsetIndex], n: usize) -> Result<Scenario> {
        Self::downward_close_capped(generators, n, DEFAULT_MAX_N)
    }

    pub fn downward_close_capped(
        generators: &[SubsetIndex],
        n: usize,
        max_n: usize,
    ) -> Result<Scenario> {
        if n == 0 {
            return Err(Error::domain("ground set must be non-empty"));
        }
        if n > max_n.min(ENCODING_MAX_N) {
            return Err(Error::domain(format!(
                "ground set size {n} exceeds cap {}",
                max_n.min(ENCODING_MAX_N)
            )));
        }
        let full = SubsetIndex::full(n);
        let mut members = std::collections::BTreeSet::new();
        members.insert(SubsetIndex::EMPTY);
        for &g in generators {
            if !g.is_subset_of(full) {
                return Err(Error::domain(format!(
                    "generator {g:?} contains an element outside [{n}]"
                )));
            }
            members.extend(g.subsets());
        }
        Ok(Self::from_closed(n, members.into_iter().collect()))
    }

    /// `members` must be downward closed and canonically sorted.
    fn from_closed(n: usize, members: Vec<SubsetIndex>) -> Scenario {
        let generators = members
            .iter()
            .copied()
            .filter(|&s| !members.iter().any(|&t| s.is_proper_subset_of(t)))
            .collect();
        Scenario {
            n,
            members,
            generators,
        }
    }

    /// The `n`-cycle, generated by `{i, i+1}` with indices taken modulo `n`.
    pub fn cycle(n: usize) -> Result<Scenario> {
        if n < 3 {
            return Err(Error::domain(format!("cycle scenario needs n >= 3, got {n}")));
        }
        let gens: Vec<_> = (1..=n)
            .map(|i| SubsetIndex::of(&[i, i % n + 1]))
            .collect();
        Self::downward_close(&gens, n)
    }

    /// The four-variable scenario generated by `{w,y,z}`, `{x,y,z}`, `{w,x}` with
    /// `w, x, y, z = 1, 2, 3, 4`.
    pub fn zhang_yeung() -> Scenario {
        let gens = [
            SubsetIndex::of(&[ZY_W, ZY_Y, ZY_Z]),
            SubsetIndex::of(&[ZY_X, ZY_Y, ZY_Z]),
            SubsetIndex::of(&[ZY_W, ZY_X]),
        ];
        Self::downward_close(&gens, 4).expect("fixed scenario")
    }

    /// All of `2^[n]`.
    pub fn full(n: usize) -> Result<Scenario> {
        Self::downward_close(&[SubsetIndex::full(n.min(ENCODING_MAX_N))], n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SubsetIndex] {
        &self.members
    }

    pub fn nonempty_members(&self) -> &[SubsetIndex] {
        &self.members[1..]
    }

    pub fn generators(&self) -> &[SubsetIndex] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: SubsetIndex) -> bool {
        self.position(s).is_some()
    }

    /// Position of `s` in the canonical member list.
    pub fn position(&self, s: SubsetIndex) -> Option<usize> {
        self.members.binary_search(&s).ok()
    }
}

/// Ground-set indices of the named variables in [`Scenario::zhang_yeung`].
pub const ZY_W: usize = 1;
pub const ZY_X: usize = 2;
pub const ZY_Y: usize = 3;
pub const ZY_Z: usize = 4;
