use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use twofloat::TwoFloat;

use super::vector::{RankVector, MAX_DENSE_N};
use crate::error::{Error, Result};
use crate::polyhedra::Rational;
use crate::sets::SubsetIndex;

/// Default tolerance, in bits, for checks on entropy values.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Total-variation slack allowed between tables that did not come from exact rationals.
pub const DECIMAL_TV_TOLERANCE: f64 = 1e-12;

/// A finite-outcome distribution over the variables in `support`.
///
/// Outcomes are tuples of alphabet indices, one per variable in increasing element
/// order. Zero-probability outcomes are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    support: SubsetIndex,
    alphabets: Vec<Vec<String>>,
    table: BTreeMap<Vec<u32>, Rational>,
    exact: bool,
}

impl JointDistribution {
    /// `alphabets` lists one alphabet per element of `support`, in increasing order.
    ///
    /// With `exact` the probabilities must sum to exactly one; otherwise (probabilities
    /// transcribed from decimals) the mass may be off by [`DECIMAL_TV_TOLERANCE`].
    pub fn new(
        support: SubsetIndex,
        alphabets: Vec<Vec<String>>,
        entries: impl IntoIterator<Item = (Vec<u32>, Rational)>,
        exact: bool,
    ) -> Result<Self> {
        if alphabets.len() != support.len() {
            return Err(Error::domain(format!(
                "{} variables but {} alphabets",
                support.len(),
                alphabets.len()
            )));
        }
        if let Some(i) = alphabets.iter().position(|a| a.is_empty()) {
            return Err(Error::domain(format!("alphabet {i} is empty")));
        }
        let mut table = BTreeMap::new();
        let mut mass = Rational::zero();
        for (outcome, p) in entries {
            if outcome.len() != alphabets.len()
                || outcome.iter().zip(&alphabets).any(|(o, a)| *o as usize >= a.len())
            {
                return Err(Error::domain(format!("outcome {outcome:?} outside the alphabets")));
            }
            if p.is_negative() {
                return Err(Error::domain(format!("negative probability for {outcome:?}")));
            }
            if p.is_zero() {
                continue;
            }
            mass += &p;
            let slot = table.entry(outcome).or_insert_with(Rational::zero);
            *slot += p;
        }
        let deviation = (&mass - Rational::one()).abs();
        let ok = if exact {
            deviation.is_zero()
        } else {
            deviation.to_f64().unwrap_or(f64::INFINITY) <= DECIMAL_TV_TOLERANCE
        };
        if !ok {
            return Err(Error::domain(format!("total probability is {mass}, not 1")));
        }
        Ok(JointDistribution {
            support,
            alphabets,
            table,
            exact,
        })
    }

    /// Uniform distribution over the listed outcomes (duplicates count with multiplicity).
    pub fn uniform_over(
        support: SubsetIndex,
        alphabets: Vec<Vec<String>>,
        outcomes: &[Vec<u32>],
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::domain("uniform distribution needs an outcome"));
        }
        let p = Rational::new(BigInt::one(), BigInt::from(outcomes.len()));
        Self::new(
            support,
            alphabets,
            outcomes.iter().map(|o| (o.clone(), p.clone())),
            true,
        )
    }

    /// Single outcome on the empty variable set.
    pub fn trivial() -> Self {
        JointDistribution {
            support: SubsetIndex::EMPTY,
            alphabets: Vec::new(),
            table: BTreeMap::from([(Vec::new(), Rational::one())]),
            exact: true,
        }
    }

    pub fn support(&self) -> SubsetIndex {
        self.support
    }

    pub fn alphabets(&self) -> &[Vec<String>] {
        &self.alphabets
    }

    /// Alphabet of ground element `v`, if it is a variable of this distribution.
    pub fn alphabet_of(&self, v: usize) -> Option<&[String]> {
        self.support
            .elements()
            .position(|e| e == v)
            .map(|i| self.alphabets[i].as_slice())
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Outcomes with positive probability, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.table.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn probability(&self, outcome: &[u32]) -> Rational {
        self.table.get(outcome).cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of joint outcomes, positive or not.
    pub fn outcome_count(&self) -> u128 {
        self.alphabets.iter().map(|a| a.len() as u128).product()
    }

    pub fn marginalize(&self, target: SubsetIndex) -> Result<JointDistribution> {
        if !target.is_subset_of(self.support) {
            return Err(Error::domain(format!(
                "{target:?} is not a subset of the variables {:?}",
                self.support
            )));
        }
        let keep: Vec<usize> = self
            .support
            .elements()
            .enumerate()
            .filter(|(_, e)| target.contains(*e))
            .map(|(i, _)| i)
            .collect();
        let mut table: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (outcome, p) in &self.table {
            let key = keep.iter().map(|&i| outcome[i]).collect();
            *table.entry(key).or_insert_with(Rational::zero) += p;
        }
        Ok(JointDistribution {
            support: target,
            alphabets: keep.iter().map(|&i| self.alphabets[i].clone()).collect(),
            table,
            exact: self.exact,
        })
    }

    /// Entropy in bits, evaluated in double-double arithmetic.
    pub fn shannon_entropy(&self) -> f64 {
        let mut h = TwoFloat::from(0.0);
        for p in self.table.values() {
            if p.is_one() {
                continue;
            }
            let p = to_twofloat(p);
            h -= p * p.ln();
        }
        (h / twofloat::consts::LN_2).hi().max(0.0)
    }

    /// Entropies of all marginals. The distribution must be over exactly `[n]`.
    pub fn entropy_vector(&self) -> Result<RankVector<f64>> {
        let n = self.support.len();
        if self.support != SubsetIndex::full(n) || n > MAX_DENSE_N {
            return Err(Error::domain(format!(
                "entropy vector needs a distribution over [n], got {:?}",
                self.support
            )));
        }
        let values: Vec<f64> = (0..1u32 << n)
            .into_par_iter()
            .map(|b| {
                self.marginalize(SubsetIndex::from_bits(b))
                    .expect("subset of support")
                    .shannon_entropy()
            })
            .collect();
        RankVector::new(n, values)
    }

    /// Entropy of the marginal on `s`.
    pub fn entropy_of(&self, s: SubsetIndex) -> Result<f64> {
        Ok(self.marginalize(s)?.shannon_entropy())
    }

    /// `I(S:T|R) = H(RS) + H(RT) − H(RST) − H(R)` in bits.
    pub fn mutual_information(&self, s: SubsetIndex, t: SubsetIndex, r: SubsetIndex) -> Result<f64> {
        if !s.is_disjoint(t) || !s.is_disjoint(r) || !t.is_disjoint(r) {
            return Err(Error::domain("mutual information arguments must be disjoint"));
        }
        let h = |x: SubsetIndex| self.entropy_of(x);
        Ok(h(r.union(s))? + h(r.union(t))? - h(r.union(s).union(t))? - h(r)?)
    }

    /// Total-variation distance to another distribution on the same variables and alphabets.
    pub fn total_variation(&self, other: &JointDistribution) -> Option<Rational> {
        if self.support != other.support || self.alphabets != other.alphabets {
            return None;
        }
        let mut sum = Rational::zero();
        for (k, p) in &self.table {
            sum += (p - other.probability(k)).abs();
        }
        for (k, q) in &other.table {
            if !self.table.contains_key(k) {
                sum += q;
            }
        }
        Some(sum / Rational::from_integer(2.into()))
    }
}

fn to_twofloat(p: &Rational) -> TwoFloat {
    const EXACT: i128 = 1 << 100;
    match (p.numer().to_i128(), p.denom().to_i128()) {
        (Some(a), Some(b)) if a.abs() < EXACT && b < EXACT => TwoFloat::from(a) / TwoFloat::from(b),
        _ => TwoFloat::from(p.to_f64().unwrap_or(0.0)),
    }
}
