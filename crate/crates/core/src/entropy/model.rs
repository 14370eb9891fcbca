use num_traits::{Signed, ToPrimitive, Zero};

use super::distribution::{JointDistribution, DECIMAL_TV_TOLERANCE};
use super::vector::PartialRankVector;
use crate::error::{Error, Result};
use crate::polyhedra::{LinearProgram, LpCertificate, Rational, VarDomain};
use crate::sets::{Scenario, SubsetIndex};

/// Default cap on the number of joint outcomes in the marginal LP.
pub const DEFAULT_OUTCOME_CAP: u128 = 1_000_000;

/// One distribution per scenario member, indexed like `scenario.members()`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalModel {
    scenario: Scenario,
    tables: Vec<JointDistribution>,
    alphabets: Vec<Option<Vec<String>>>,
}

impl MarginalModel {
    /// Tables for every member, in member order. Each variable must carry the same
    /// alphabet in every table mentioning it.
    pub fn new(scenario: Scenario, tables: Vec<JointDistribution>) -> Result<Self> {
        if tables.len() != scenario.len() {
            return Err(Error::domain(format!(
                "scenario has {} members, got {} tables",
                scenario.len(),
                tables.len()
            )));
        }
        for (s, t) in scenario.members().iter().zip(&tables) {
            if t.support() != *s {
                return Err(Error::domain(format!(
                    "table for {s:?} is over {:?}",
                    t.support()
                )));
            }
        }
        let mut alphabets: Vec<Option<Vec<String>>> = vec![None; scenario.n()];
        for t in &tables {
            for (e, a) in t.support().elements().zip(t.alphabets()) {
                match &alphabets[e - 1] {
                    None => alphabets[e - 1] = Some(a.clone()),
                    Some(prev) if prev != a => {
                        return Err(Error::domain(format!(
                            "variable {e} has two different alphabets"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(MarginalModel {
            scenario,
            tables,
            alphabets,
        })
    }

    /// Tables for the generators (in generator order); every other member's table is the
    /// marginal of the first generator containing it.
    pub fn from_generators(scenario: Scenario, tables: Vec<JointDistribution>) -> Result<Self> {
        let gens = scenario.generators();
        if tables.len() != gens.len() {
            return Err(Error::domain(format!(
                "scenario has {} generators, got {} tables",
                gens.len(),
                tables.len()
            )));
        }
        for (g, t) in gens.iter().zip(&tables) {
            if t.support() != *g {
                return Err(Error::domain(format!("table for {g:?} is over {:?}", t.support())));
            }
        }
        let all = scenario
            .members()
            .iter()
            .map(|&s| {
                let k = gens.iter().position(|g| s.is_subset_of(*g)).expect("closed scenario");
                tables[k].marginalize(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(scenario, all)
    }

    /// Marginals of one joint distribution over `[n]`; always compatible.
    pub fn from_joint(scenario: Scenario, joint: &JointDistribution) -> Result<Self> {
        let tables = scenario
            .members()
            .iter()
            .map(|&s| joint.marginalize(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(scenario, tables)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self, s: SubsetIndex) -> Option<&JointDistribution> {
        self.scenario.position(s).map(|i| &self.tables[i])
    }

    pub fn tables(&self) -> &[JointDistribution] {
        &self.tables
    }

    /// Alphabet of variable `v`; `None` when no member mentions it.
    pub fn alphabet(&self, v: usize) -> Option<&[String]> {
        self.alphabets.get(v.wrapping_sub(1))?.as_deref()
    }

    fn full_alphabets(&self) -> Result<Vec<Vec<String>>> {
        self.alphabets
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.clone()
                    .ok_or_else(|| Error::domain(format!("variable {} is unobserved", i + 1)))
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.tables.iter().all(|t| t.is_exact())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityViolation {
    pub superset: SubsetIndex,
    pub subset: SubsetIndex,
    /// Total-variation distance between the marginal of the larger table and the smaller one.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CompatibilityReport {
    pub violations: Vec<CompatibilityViolation>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares every pair `T ⊊ S` of members. Exact models must agree exactly.
pub fn check_compatibility(model: &MarginalModel) -> CompatibilityReport {
    let members = model.scenario.members();
    let tolerance = if model.is_exact() {
        None
    } else {
        Some(DECIMAL_TV_TOLERANCE)
    };
    let mut violations = Vec::new();
    for (i, &s) in members.iter().enumerate() {
        for (j, &t) in members.iter().enumerate() {
            if !t.is_proper_subset_of(s) {
                continue;
            }
            let marg = model.tables[i].marginalize(t).expect("subset");
            let tv = marg
                .total_variation(&model.tables[j])
                .expect("consistent alphabets");
            let bad = match tolerance {
                None => !tv.is_zero(),
                Some(tol) => tv.to_f64().unwrap_or(f64::INFINITY) > tol,
            };
            if bad {
                violations.push(CompatibilityViolation {
                    superset: s,
                    subset: t,
                    deviation: tv.to_f64().unwrap_or(f64::INFINITY),
                });
            }
        }
    }
    CompatibilityReport { violations }
}

fn require_compatible(model: &MarginalModel) -> Result<()> {
    let report = check_compatibility(model);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Incompatible(format!(
            "marginal of {:?} onto {:?} differs by {:e} in total variation",
            v.superset, v.subset, v.deviation
        ))),
    }
}

/// Entropy of every member's table.
pub fn marginal_entropy_vector(model: &MarginalModel) -> Result<PartialRankVector<f64>> {
    require_compatible(model)?;
    let values = model.tables.iter().map(|t| t.shannon_entropy()).collect();
    PartialRankVector::new(model.scenario.clone(), values)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MarginalLpVerdict {
    /// A joint distribution over all variables reproducing every table.
    NonContextual { joint: JointDistribution },
    /// Weights `y` on the marginal probabilities `P_S(s)`, one list per generator in
    /// generator order and per outcome of that generator in lexicographic order. Every
    /// deterministic joint assignment scores `Σ y ≤ 0` while the model scores `> 0`.
    Contextual { farkas: Vec<Vec<Rational>> },
}

impl MarginalLpVerdict {
    pub fn is_contextual(&self) -> bool {
        matches!(self, MarginalLpVerdict::Contextual { .. })
    }
}

fn mixed_radix(sizes: &[usize], mut k: usize) -> Vec<u32> {
    let mut out = vec![0u32; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = (k % sizes[i]) as u32;
        k /= sizes[i];
    }
    out
}

fn project_outcome(joint: &[u32], support: SubsetIndex) -> Vec<u32> {
    support.elements().map(|e| joint[e - 1]).collect()
}

/// Decides whether a joint distribution over all `n` variables reproduces the model.
pub fn marginal_lp(model: &MarginalModel, outcome_cap: u128) -> Result<MarginalLpVerdict> {
    require_compatible(model)?;
    let alphabets = model.full_alphabets()?;
    let sizes: Vec<usize> = alphabets.iter().map(|a| a.len()).collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total > outcome_cap {
        return Err(Error::domain(format!(
            "{total} joint outcomes exceed the cap of {outcome_cap}"
        )));
    }
    let total = total as usize;
    let gens = model.scenario.generators();
    // row index of (generator, local outcome)
    let mut offsets = Vec::with_capacity(gens.len());
    let mut rows = 0usize;
    let gen_sizes: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| g.elements().map(|e| sizes[e - 1]).collect())
        .collect();
    for gs in &gen_sizes {
        offsets.push(rows);
        rows += gs.iter().product::<usize>();
    }
    let local_index = |k: usize, local: &[u32]| -> usize {
        local
            .iter()
            .zip(&gen_sizes[k])
            .fold(0usize, |acc, (&o, &s)| acc * s + o as usize)
    };
    let mut coeffs: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
    for j in 0..total {
        let joint = mixed_radix(&sizes, j);
        for (k, g) in gens.iter().enumerate() {
            let r = offsets[k] + local_index(k, &project_outcome(&joint, *g));
            coeffs[r].push((j, Rational::from_integer(1.into())));
        }
    }
    let mut lp = LinearProgram::new(vec![VarDomain::NonNegative; total]);
    for (k, g) in gens.iter().enumerate() {
        let table = model.table(*g).expect("generator is a member");
        let count: usize = gen_sizes[k].iter().product();
        for l in 0..count {
            let local = mixed_radix(&gen_sizes[k], l);
            lp.add_eq(std::mem::take(&mut coeffs[offsets[k] + l]), table.probability(&local));
        }
    }
    let result = lp.solve()?;
    match result.certificate {
        LpCertificate::Optimal { point, .. } => {
            let n = model.scenario.n();
            let entries = point
                .into_iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(j, p)| (mixed_radix(&sizes, j), p));
            let joint = JointDistribution::new(
                SubsetIndex::full(n),
                alphabets,
                entries,
                model.is_exact(),
            )?;
            Ok(MarginalLpVerdict::NonContextual { joint })
        }
        LpCertificate::Farkas { multipliers } => {
            let farkas = offsets
                .iter()
                .zip(&gen_sizes)
                .map(|(&o, gs)| multipliers[o..o + gs.iter().product::<usize>()].to_vec())
                .collect();
            Ok(MarginalLpVerdict::Contextual { farkas })
        }
        LpCertificate::Ray { .. } => unreachable!("zero objective"),
    }
}

/// Checks a marginal-LP verdict against the model by substitution.
pub fn verify_marginal_lp(model: &MarginalModel, verdict: &MarginalLpVerdict) -> bool {
    let gens = model.scenario.generators();
    match verdict {
        MarginalLpVerdict::NonContextual { joint } => gens.iter().all(|g| {
            match joint.marginalize(*g) {
                Ok(m) => m.total_variation(model.table(*g).expect("member")) == Some(Rational::zero()),
                Err(_) => false,
            }
        }),
        MarginalLpVerdict::Contextual { farkas } => {
            if farkas.len() != gens.len() {
                return false;
            }
            let Ok(alphabets) = model.full_alphabets() else {
                return false;
            };
            let sizes: Vec<usize> = alphabets.iter().map(|a| a.len()).collect();
            let gen_sizes: Vec<Vec<usize>> = gens
                .iter()
                .map(|g| g.elements().map(|e| sizes[e - 1]).collect())
                .collect();
            let index = |k: usize, local: &[u32]| {
                local
                    .iter()
                    .zip(&gen_sizes[k])
                    .fold(0usize, |acc, (&o, &s)| acc * s + o as usize)
            };
            let total: usize = sizes.iter().product();
            let deterministic_ok = (0..total).all(|j| {
                let joint = mixed_radix(&sizes, j);
                let score = gens.iter().enumerate().fold(Rational::zero(), |acc, (k, g)| {
                    acc + &farkas[k][index(k, &project_outcome(&joint, *g))]
                });
                !score.is_positive()
            });
            let model_score = gens.iter().enumerate().fold(Rational::zero(), |acc, (k, g)| {
                let t = model.table(*g).expect("member");
                let count: usize = gen_sizes[k].iter().product();
                (0..count).fold(acc, |acc, l| {
                    acc + &farkas[k][l] * t.probability(&mixed_radix(&gen_sizes[k], l))
                })
            });
            deterministic_ok && model_score.is_positive()
        }
    }
}
