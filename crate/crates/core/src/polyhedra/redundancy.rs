//! Implication checks and redundancy removal for homogeneous systems.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::lp::{LinearProgram, LpCertificate, VarDomain};
use super::{InequalitySystem, LinearInequality, Rational, Sense};
use crate::error::{Error, Result};
use crate::sets::SubsetIndex;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Redundancy {
    None,
    /// Duplicates and rows that restate an equality.
    #[default]
    Pairwise,
    /// Every row implied by the remaining rows, certified by LP.
    Exact,
}

impl std::str::FromStr for Redundancy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Redundancy::None),
            "pairwise" => Ok(Redundancy::Pairwise),
            "exact" => Ok(Redundancy::Exact),
            other => Err(Error::domain(format!("unknown redundancy policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Implication {
    /// `forward[i]` multiplies row `i`; the combination reproduces the target and is
    /// nonnegative on inequality rows. An equality target also gets the multipliers
    /// for its negation.
    Implied {
        forward: Vec<Rational>,
        backward: Option<Vec<Rational>>,
    },
    /// A point over the coordinates satisfying every row and violating the target.
    NotImplied { witness: Vec<Rational> },
}

impl Implication {
    pub fn is_implied(&self) -> bool {
        matches!(self, Implication::Implied { .. })
    }
}

/// Dense target vector over `coords`.
fn dense(coords: &[SubsetIndex], row: &LinearInequality) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); coords.len()];
    for &(s, c) in row.terms() {
        let j = coords
            .binary_search(&s)
            .map_err(|_| Error::UnknownCoordinate { subset: s })?;
        v[j] = Rational::from_integer(c.into());
    }
    Ok(v)
}

/// Decides whether `Σ target_j x_j ≥ 0` holds on `{x : rows}`.
///
/// Solves the multiplier system `Σ λ_i g_i + Σ μ_k e_k = target`, `λ ≥ 0`; its Farkas
/// vector, negated, is a point of the cone on which the target is negative.
fn implied_by(
    coords: &[SubsetIndex],
    rows: &[&LinearInequality],
    target: &[Rational],
) -> std::result::Result<Vec<Rational>, Vec<Rational>> {
    let domains = rows
        .iter()
        .map(|r| match r.sense() {
            Sense::GreaterEq => VarDomain::NonNegative,
            Sense::Equal => VarDomain::Free,
        })
        .collect();
    let mut lp = LinearProgram::new(domains);
    let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); coords.len()];
    for (i, r) in rows.iter().enumerate() {
        for &(s, c) in r.terms() {
            let j = coords.binary_search(&s).expect("supported row");
            columns[j].push((i, Rational::from_integer(c.into())));
        }
    }
    for (col, t) in columns.into_iter().zip(target) {
        lp.add_eq(col, t.clone());
    }
    let result = lp.solve().expect("well-formed implication program");
    match result.certificate {
        LpCertificate::Optimal { point, .. } => Ok(point),
        LpCertificate::Farkas { multipliers } => Err(multipliers.into_iter().map(|y| -y).collect()),
        LpCertificate::Ray { .. } => unreachable!("feasibility program has a zero objective"),
    }
}

/// Whether `target` is implied by all rows of `system`.
pub fn implication(system: &InequalitySystem, target: &LinearInequality) -> Result<Implication> {
    let coords = system.coordinates();
    let t = dense(coords, target)?;
    let rows: Vec<&LinearInequality> = system.rows().iter().collect();
    let forward = match implied_by(coords, &rows, &t) {
        Ok(m) => m,
        Err(witness) => return Ok(Implication::NotImplied { witness }),
    };
    if !target.is_equality() {
        return Ok(Implication::Implied {
            forward,
            backward: None,
        });
    }
    let neg: Vec<Rational> = t.iter().map(|v| -v).collect();
    match implied_by(coords, &rows, &neg) {
        Ok(backward) => Ok(Implication::Implied {
            forward,
            backward: Some(backward),
        }),
        Err(witness) => Ok(Implication::NotImplied { witness }),
    }
}

/// Removes redundant rows. Surviving rows keep their relative order.
///
/// Under [`Redundancy::Exact`] the result is irredundant: every surviving inequality
/// has a witness point satisfying all other rows but not it, and the equalities are
/// linearly independent.
pub fn remove_redundant(system: &InequalitySystem, policy: Redundancy) -> InequalitySystem {
    let keep = match policy {
        Redundancy::None => vec![true; system.len()],
        Redundancy::Pairwise => pairwise_mask(system.rows()),
        Redundancy::Exact => exact_mask(system),
    };
    let rows = system
        .rows()
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(r, _)| r.clone())
        .collect();
    InequalitySystem::new(system.n(), system.coordinates().to_vec(), rows)
        .expect("subsystem of a valid system")
}

pub(crate) fn pairwise_mask(rows: &[LinearInequality]) -> Vec<bool> {
    use std::collections::HashSet;
    let equalities: HashSet<&LinearInequality> = rows.iter().filter(|r| r.is_equality()).collect();
    let mut seen = HashSet::new();
    rows.iter()
        .map(|r| {
            if r.is_trivial() || !seen.insert(r.clone()) {
                return false;
            }
            r.is_equality() || !equalities.contains(&r.with_sense(Sense::Equal))
        })
        .collect()
}

pub(crate) fn exact_mask(system: &InequalitySystem) -> Vec<bool> {
    let coords = system.coordinates();
    let rows = system.rows();
    let mut keep = pairwise_mask(rows);
    independent_equalities(coords, rows, &mut keep);

    let candidates: Vec<usize> = (0..rows.len())
        .filter(|&i| keep[i] && !rows[i].is_equality())
        .collect();
    let implied_by_rest = |i: usize, keep: &[bool]| -> bool {
        let others: Vec<&LinearInequality> = rows
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, r)| r)
            .collect();
        let t = dense(coords, &rows[i]).expect("supported row");
        implied_by(coords, &others, &t).is_ok()
    };
    // rows not implied by all others belong to every irredundant subsystem
    let essential: Vec<bool> = if rayon::current_num_threads() > 1 {
        candidates
            .par_iter()
            .map(|&i| !implied_by_rest(i, &keep))
            .collect()
    } else {
        vec![false; candidates.len()]
    };
    for (&i, &ess) in candidates.iter().zip(&essential) {
        if ess {
            continue;
        }
        if implied_by_rest(i, &keep) {
            keep[i] = false;
        }
    }
    keep
}

/// Drops equalities that are linear combinations of earlier ones.
fn independent_equalities(coords: &[SubsetIndex], rows: &[LinearInequality], keep: &mut [bool]) {
    // reduced basis rows with their pivot columns
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if !keep[i] || !r.is_equality() {
            continue;
        }
        let mut v = dense(coords, r).expect("supported row");
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / &b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => basis.push((p, v)),
            None => keep[i] = false,
        }
    }
}

/// `true` when `point` is a valid non-implication witness for row `i` of `system`.
pub fn is_witness(system: &InequalitySystem, i: usize, point: &[Rational]) -> bool {
    let coords = system.coordinates();
    system.rows().iter().enumerate().all(|(j, r)| {
        let v = r.evaluate_point(coords, point).expect("supported row");
        if j == i {
            match r.sense() {
                Sense::GreaterEq => v.is_negative(),
                Sense::Equal => !v.is_zero(),
            }
        } else {
            match r.sense() {
                Sense::GreaterEq => !v.is_negative(),
                Sense::Equal => v.is_zero(),
            }
        }
    })
}
