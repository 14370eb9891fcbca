//! Exact linear algebra for polyhedral cones over subset coordinates.

mod fm;
mod lp;
mod redundancy;
pub(crate) mod simplex;

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sets::SubsetIndex;

pub use fm::{fm_eliminate, project, project_with, ProjectOptions, Projection, ProjectionStats};
pub use lp::{
    lp_solve, Direction, LinearProgram, LpCertificate, LpConstraint, LpResult, LpStatus,
    VarDomain,
};
pub use redundancy::{implication, is_witness, remove_redundant, Implication, Redundancy};

/// Exact rational number (arbitrary precision, always reduced, positive denominator).
pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    /// `Σ c_S f(S) ≥ 0`
    GreaterEq,
    /// `Σ c_S f(S) = 0`
    Equal,
}

/// Values a linear form can be evaluated on: exact rationals or entropies in bits.
pub trait RankValue: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn add_scaled(&self, coef: i64, v: &Self) -> Self;
    /// Strictly below `-tolerance`; exact types ignore the tolerance.
    fn below(&self, tolerance: f64) -> bool;
    /// Within `tolerance` of zero; exact types ignore the tolerance.
    fn near_zero(&self, tolerance: f64) -> bool;
    fn to_f64(&self) -> f64;
}

impl RankValue for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_scaled(&self, coef: i64, v: &Self) -> Self {
        self + v * Rational::from_integer(coef.into())
    }
    fn below(&self, _tolerance: f64) -> bool {
        self.is_negative()
    }
    fn near_zero(&self, _tolerance: f64) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl RankValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&self, coef: i64, v: &Self) -> Self {
        self + coef as f64 * v
    }
    fn below(&self, tolerance: f64) -> bool {
        *self < -tolerance
    }
    fn near_zero(&self, tolerance: f64) -> bool {
        self.abs() <= tolerance
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// A homogeneous linear constraint `Σ_S c_S f(S) ≥ 0` (or `= 0`) over subset coordinates.
///
/// Stored normalized: integer coefficients with gcd 1, zero terms removed, terms in
/// canonical subset order. Equalities additionally have a positive leading coefficient,
/// so equal constraints compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearInequality {
    terms: Vec<(SubsetIndex, i64)>,
    sense: Sense,
}

impl LinearInequality {
    pub fn new<I: IntoIterator<Item = (SubsetIndex, i64)>>(terms: I, sense: Sense) -> Result<Self> {
        let mut acc: Vec<(SubsetIndex, i64)> = Vec::new();
        for (s, c) in terms {
            acc.push((s, c));
        }
        acc.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(SubsetIndex, i64)> = Vec::with_capacity(acc.len());
        for (s, c) in acc {
            match merged.last_mut() {
                Some((ls, lc)) if *ls == s => *lc = lc.checked_add(c).ok_or(Error::Overflow)?,
                _ => merged.push((s, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        Ok(Self::normalized(merged, sense))
    }

    pub fn ge<I: IntoIterator<Item = (SubsetIndex, i64)>>(terms: I) -> Self {
        Self::new(terms, Sense::GreaterEq).expect("coefficients within i64")
    }

    pub fn eq<I: IntoIterator<Item = (SubsetIndex, i64)>>(terms: I) -> Self {
        Self::new(terms, Sense::Equal).expect("coefficients within i64")
    }

    /// Scales rational coefficients to coprime integers (positive scaling, sense kept).
    pub fn from_rational<I: IntoIterator<Item = (SubsetIndex, Rational)>>(
        terms: I,
        sense: Sense,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut lcm = BigInt::from(1);
        for (_, c) in &terms {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<(SubsetIndex, BigInt)> = terms
            .into_iter()
            .map(|(s, c)| (s, (c * Rational::from_integer(lcm.clone())).to_integer()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        let g = if g.is_zero() { BigInt::from(1) } else { g };
        let mut out = Vec::with_capacity(ints.len());
        for (s, v) in ints {
            out.push((s, (v / &g).to_i64().ok_or(Error::Overflow)?));
        }
        Self::new(out, sense)
    }

    fn normalized(mut terms: Vec<(SubsetIndex, i64)>, sense: Sense) -> Self {
        let g = terms
            .iter()
            .fold(0u64, |acc, &(_, c)| acc.gcd(&c.unsigned_abs()));
        if g > 1 {
            for t in &mut terms {
                t.1 /= g as i64;
            }
        }
        if sense == Sense::Equal && terms.first().is_some_and(|t| t.1 < 0) {
            for t in &mut terms {
                t.1 = -t.1;
            }
        }
        LinearInequality { terms, sense }
    }

    pub fn terms(&self) -> &[(SubsetIndex, i64)] {
        &self.terms
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn is_equality(&self) -> bool {
        self.sense == Sense::Equal
    }

    /// `0 ≥ 0` or `0 = 0`.
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: SubsetIndex) -> i64 {
        self.terms
            .binary_search_by(|t| t.0.cmp(&s))
            .map(|k| self.terms[k].1)
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = SubsetIndex> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn negated(&self) -> Self {
        Self::normalized(
            self.terms.iter().map(|&(s, c)| (s, -c)).collect(),
            self.sense,
        )
    }

    /// Same coefficients with a different sense.
    pub fn with_sense(&self, sense: Sense) -> Self {
        Self::normalized(self.terms.clone(), sense)
    }

    /// Value of the linear form; `None` if some coordinate in the support has no value.
    pub fn evaluate<T: RankValue>(&self, value: impl Fn(SubsetIndex) -> Option<T>) -> Option<T> {
        let mut acc = T::zero();
        for &(s, c) in &self.terms {
            acc = acc.add_scaled(c, &value(s)?);
        }
        Some(acc)
    }

    /// Evaluates on a dense rational point aligned with `coordinates`.
    pub fn evaluate_point(&self, coordinates: &[SubsetIndex], point: &[Rational]) -> Option<Rational> {
        self.evaluate(|s| {
            coordinates
                .binary_search(&s)
                .ok()
                .map(|k| point[k].clone())
        })
    }
}

impl std::fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, &(s, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let space = if k > 0 { " " } else { "" };
            match c.unsigned_abs() {
                1 => write!(f, "{sep}{sign}{space}f({s:?})")?,
                a => write!(f, "{sep}{sign}{space}{a}f({s:?})")?,
            }
        }
        match self.sense {
            Sense::GreaterEq => write!(f, " >= 0"),
            Sense::Equal => write!(f, " = 0"),
        }
    }
}

impl Ord for LinearInequality {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .sense
            .cmp(&self.sense)
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for LinearInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite list of homogeneous constraints over an ordered coordinate list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InequalitySystem {
    n: usize,
    coordinates: Vec<SubsetIndex>,
    rows: Vec<LinearInequality>,
}

impl InequalitySystem {
    /// Coordinates are sorted canonically; trivial and duplicate rows are dropped
    /// (first occurrence wins).
    pub fn new(
        n: usize,
        mut coordinates: Vec<SubsetIndex>,
        rows: Vec<LinearInequality>,
    ) -> Result<Self> {
        coordinates.sort();
        coordinates.dedup();
        let full = SubsetIndex::full(n.min(crate::sets::ENCODING_MAX_N));
        if let Some(c) = coordinates.iter().find(|c| !c.is_subset_of(full)) {
            return Err(Error::domain(format!("coordinate {c:?} outside [{n}]")));
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(rows.len());
        for row in rows {
            if let Some(s) = row.support().find(|s| coordinates.binary_search(s).is_err()) {
                return Err(Error::UnknownCoordinate { subset: s });
            }
            if row.is_trivial() || !seen.insert(row.clone()) {
                continue;
            }
            kept.push(row);
        }
        Ok(InequalitySystem {
            n,
            coordinates,
            rows: kept,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coordinates(&self) -> &[SubsetIndex] {
        &self.coordinates
    }

    pub fn rows(&self) -> &[LinearInequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &LinearInequality> {
        self.rows.iter().filter(|r| !r.is_equality())
    }

    pub fn equalities(&self) -> impl Iterator<Item = &LinearInequality> {
        self.rows.iter().filter(|r| r.is_equality())
    }

    pub fn coordinate_position(&self, s: SubsetIndex) -> Option<usize> {
        self.coordinates.binary_search(&s).ok()
    }

    /// Returns a copy with additional rows appended.
    pub fn with_rows<I: IntoIterator<Item = LinearInequality>>(&self, extra: I) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.extend(extra);
        InequalitySystem::new(self.n, self.coordinates.clone(), rows)
    }

    /// Rows sorted in canonical order (equalities first).
    pub fn canonicalized(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort();
        InequalitySystem {
            n: self.n,
            coordinates: self.coordinates.clone(),
            rows,
        }
    }

    /// Indices of rows violated by a point (beyond `tolerance` for real-valued points).
    pub fn violations<T: RankValue>(
        &self,
        value: impl Fn(SubsetIndex) -> Option<T>,
        tolerance: f64,
    ) -> Option<Vec<(usize, T)>> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let v = row.evaluate(&value)?;
            let bad = match row.sense() {
                Sense::GreaterEq => v.below(tolerance),
                Sense::Equal => !v.near_zero(tolerance),
            };
            if bad {
                out.push((i, v));
            }
        }
        Some(out)
    }

    /// Exact membership test for a dense point aligned with the coordinates.
    pub fn contains_point(&self, point: &[Rational]) -> bool {
        self.rows.iter().all(|r| {
            let v = r
                .evaluate_point(&self.coordinates, point)
                .expect("rows are supported on coordinates");
            match r.sense() {
                Sense::GreaterEq => !v.is_negative(),
                Sense::Equal => v.is_zero(),
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &[usize]) -> SubsetIndex {
        SubsetIndex::of(e)
    }

    #[test]
    fn normalization() {
        let r = LinearInequality::ge([(s(&[2]), 4), (s(&[1]), 2), (s(&[2]), 2)]);
        assert_eq!(r.terms(), &[(s(&[1]), 1), (s(&[2]), 3)]);
        let e = LinearInequality::eq([(s(&[1]), -3), (s(&[2]), 6)]);
        assert_eq!(e.terms(), &[(s(&[1]), 1), (s(&[2]), -2)]);
        assert_eq!(e, e.negated());
        assert!(LinearInequality::ge([(s(&[1]), 0)]).is_trivial());
    }

    #[test]
    fn rational_scaling() {
        let r = LinearInequality::from_rational(
            [(s(&[1]), ratio(1, 2)), (s(&[2]), ratio(-1, 3))],
            Sense::GreaterEq,
        )
        .unwrap();
        assert_eq!(r.terms(), &[(s(&[1]), 3), (s(&[2]), -2)]);
    }

    #[test]
    fn system_rejects_foreign_support() {
        let r = LinearInequality::ge([(s(&[3]), 1)]);
        let err = InequalitySystem::new(3, vec![s(&[1])], vec![r]);
        assert!(matches!(err, Err(Error::UnknownCoordinate { .. })));
    }

    #[test]
    fn system_dedupes() {
        let a = LinearInequality::ge([(s(&[1]), 1)]);
        let b = LinearInequality::ge([(s(&[1]), 2)]);
        let sys = InequalitySystem::new(1, vec![s(&[1])], vec![a, b]).unwrap();
        assert_eq!(sys.len(), 1);
    }

    #[test]
    fn evaluate_real_and_exact() {
        let r = LinearInequality::ge([(s(&[1]), 1), (s(&[2]), -1)]);
        let v: f64 = r.evaluate(|x| Some(x.len() as f64 + x.bits() as f64)).unwrap();
        assert_eq!(v, (1.0 + 1.0) - (1.0 + 2.0));
        let q: Rational = r.evaluate(|x| Some(rational(x.bits() as i64))).unwrap();
        assert_eq!(q, rational(-1));
    }
}
