//! The polymatroid cone, conditional-independence faces, projection onto scenarios
//! and an LP prover for Shannon-type inequalities.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::entropy::{PartialRankVector, RankVector};
use crate::error::{Error, Result};
use crate::polyhedra::{
    implication, project_with, Implication, InequalitySystem, LinearInequality, LinearProgram,
    LpCertificate, ProjectOptions, Projection, Rational, Sense, VarDomain,
};
use crate::sets::{Scenario, SubsetIndex, DEFAULT_MAX_N};

/// `I(A_S : A_T | A_R) = 0` with `R`, `S`, `T` pairwise disjoint and `S`, `T` nonempty.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CIConstraint {
    s: SubsetIndex,
    t: SubsetIndex,
    r: SubsetIndex,
}

impl CIConstraint {
    pub fn new(s: SubsetIndex, t: SubsetIndex, r: SubsetIndex) -> Result<Self> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::domain("independence constraint needs nonempty S and T"));
        }
        if !s.is_disjoint(t) || !s.is_disjoint(r) || !t.is_disjoint(r) {
            return Err(Error::domain(format!(
                "I({s:?}:{t:?}|{r:?}) has overlapping arguments"
            )));
        }
        Ok(CIConstraint { s, t, r })
    }

    pub fn s(&self) -> SubsetIndex {
        self.s
    }

    pub fn t(&self) -> SubsetIndex {
        self.t
    }

    pub fn r(&self) -> SubsetIndex {
        self.r
    }

    pub fn support(&self) -> SubsetIndex {
        self.s.union(self.t).union(self.r)
    }

    /// `f(RS) + f(RT) − f(RST) − f(R) = 0`, with `f(∅)` dropped.
    pub fn row(&self) -> LinearInequality {
        let (rs, rt, rst) = (self.r.union(self.s), self.r.union(self.t), self.support());
        let mut terms = vec![(rs, 1), (rt, 1), (rst, -1)];
        if !self.r.is_empty() {
            terms.push((self.r, -1));
        }
        LinearInequality::eq(terms)
    }
}

impl fmt::Display for CIConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({:?}:{:?}|{:?})=0", self.s, self.t, self.r)
    }
}

/// Monotonicity at the top set, elemental submodularity, and `f(∅) = 0`.
///
/// Terms on `∅` are dropped from the inequalities; the equality row keeps `f(∅)` a
/// coordinate so that the system lives on all of `2^[n]`.
pub fn elemental_system(n: usize) -> Result<InequalitySystem> {
    if n == 0 || n > DEFAULT_MAX_N {
        return Err(Error::domain(format!("n = {n} outside 1..={DEFAULT_MAX_N}")));
    }
    let full = SubsetIndex::full(n);
    let mut rows = Vec::new();
    rows.push(LinearInequality::eq([(SubsetIndex::EMPTY, 1)]));
    for i in 1..=n {
        let rest = full.without(i);
        let mut terms = vec![(full, 1)];
        if !rest.is_empty() {
            terms.push((rest, -1));
        }
        rows.push(LinearInequality::ge(terms));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let others = full.without(i).without(j);
            for r in others.subsets() {
                let mut terms = vec![(r.with(i), 1), (r.with(j), 1), (r.with(i).with(j), -1)];
                if !r.is_empty() {
                    terms.push((r, -1));
                }
                rows.push(LinearInequality::ge(terms));
            }
        }
    }
    InequalitySystem::new(n, SubsetIndex::all(n), rows)
}

/// Appends the equality row of each constraint.
pub fn ci_face(system: &InequalitySystem, constraints: &[CIConstraint]) -> Result<InequalitySystem> {
    let full = SubsetIndex::full(system.n());
    if let Some(c) = constraints.iter().find(|c| !c.support().is_subset_of(full)) {
        return Err(Error::domain(format!("{c} mentions variables outside [{}]", system.n())));
    }
    system.with_rows(constraints.iter().map(|c| c.row()))
}

/// Γ_n intersected with the face cut out by `constraints`.
pub fn constrained_cone(n: usize, constraints: &[CIConstraint]) -> Result<InequalitySystem> {
    ci_face(&elemental_system(n)?, constraints)
}

/// A directed acyclic graph on `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BayesNet {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl BayesNet {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || n > crate::sets::ENCODING_MAX_N {
            return Err(Error::domain(format!("graph size {n} out of range")));
        }
        if let Some(e) = edges.iter().find(|(u, v)| *u == 0 || *v == 0 || *u > n || *v > n) {
            return Err(Error::domain(format!("edge {e:?} leaves 1..={n}")));
        }
        edges.sort_unstable();
        edges.dedup();
        let net = BayesNet { n, edges };
        if let Some(v) = (1..=n).find(|&v| net.descendants(v).contains(v)) {
            return Err(Error::domain(format!("cycle through vertex {v}")));
        }
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parents(&self, v: usize) -> SubsetIndex {
        self.edges
            .iter()
            .filter(|(_, w)| *w == v)
            .fold(SubsetIndex::EMPTY, |acc, (u, _)| acc.with(*u))
    }

    /// Vertices reachable from `v` by a nonempty directed path.
    pub fn descendants(&self, v: usize) -> SubsetIndex {
        let mut seen = SubsetIndex::EMPTY;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == u && !seen.contains(b) {
                    seen = seen.with(b);
                    stack.push(b);
                }
            }
        }
        seen
    }
}

/// `I(v : non-descendants | parents) = 0` for every vertex whose non-descendant set is
/// nonempty, in vertex order.
pub fn local_markov_constraints(net: &BayesNet) -> Vec<CIConstraint> {
    let all = SubsetIndex::full(net.n);
    (1..=net.n)
        .filter_map(|v| {
            let pa = net.parents(v);
            let t = all
                .difference(net.descendants(v))
                .without(v)
                .difference(pa);
            CIConstraint::new(SubsetIndex::singleton(v), t, pa).ok()
        })
        .collect()
}

/// Facets of the projection of `Γ_n ∩ face` onto the scenario's nonempty members.
pub fn project_cone(
    n: usize,
    scenario: &Scenario,
    constraints: &[CIConstraint],
) -> Result<InequalitySystem> {
    Ok(project_cone_with(n, scenario, constraints, &ProjectOptions::default())?.system)
}

pub fn project_cone_with(
    n: usize,
    scenario: &Scenario,
    constraints: &[CIConstraint],
    opts: &ProjectOptions,
) -> Result<Projection> {
    if scenario.n() > n {
        return Err(Error::domain(format!(
            "scenario on [{}] does not fit in [{n}]",
            scenario.n()
        )));
    }
    let cone = constrained_cone(n, constraints)?;
    let mut p = project_with(&cone, scenario.nonempty_members(), opts)?;
    p.system = InequalitySystem::new(n, p.system.coordinates().to_vec(), p.system.rows().to_vec())?
        .canonicalized();
    Ok(p)
}

/// Outcome of [`prove_shannon`].
#[derive(Clone, Debug, PartialEq)]
pub enum ShannonVerdict {
    /// `multipliers[i]` weights row `i` of `system`; nonnegative on inequalities.
    Provable {
        system: InequalitySystem,
        multipliers: Vec<Rational>,
    },
    /// A point of the constrained cone on which the candidate fails.
    NotProvable { ray: RankVector<Rational> },
}

impl ShannonVerdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, ShannonVerdict::Provable { .. })
    }

    /// Re-checks the certificate against `candidate` by substitution.
    pub fn verify(&self, candidate: &LinearInequality, n: usize, constraints: &[CIConstraint]) -> bool {
        match self {
            ShannonVerdict::Provable {
                system,
                multipliers,
            } => {
                if multipliers.len() != system.len() {
                    return false;
                }
                let mut acc = vec![Rational::zero(); system.coordinates().len()];
                for (row, m) in system.rows().iter().zip(multipliers) {
                    if !row.is_equality() && m.is_negative() {
                        return false;
                    }
                    for &(s, c) in row.terms() {
                        let j = system.coordinate_position(s).expect("supported");
                        acc[j] += m * Rational::from_integer(c.into());
                    }
                }
                system.coordinates().iter().zip(&acc).all(|(s, v)| {
                    *v == Rational::from_integer(candidate.coefficient(*s).into())
                })
            }
            ShannonVerdict::NotProvable { ray } => {
                let Ok(cone) = constrained_cone(n, constraints) else {
                    return false;
                };
                let point: Vec<Rational> =
                    cone.coordinates().iter().map(|s| ray.get(*s).clone()).collect();
                cone.contains_point(&point)
                    && match ray.evaluate(candidate) {
                        Some(v) => match candidate.sense() {
                            Sense::GreaterEq => v.is_negative(),
                            Sense::Equal => !v.is_zero(),
                        },
                        None => false,
                    }
            }
        }
    }
}

fn check_candidate(candidate: &LinearInequality, n: usize) -> Result<()> {
    if candidate.coefficient(SubsetIndex::EMPTY) != 0 {
        return Err(Error::domain("candidate has a nonzero coefficient on H(∅)"));
    }
    let full = SubsetIndex::full(n.min(crate::sets::ENCODING_MAX_N));
    if let Some(s) = candidate.support().find(|s| !s.is_subset_of(full)) {
        return Err(Error::UnknownCoordinate { subset: s });
    }
    Ok(())
}

/// Decides whether `candidate` holds on all of `Γ_n ∩ face`.
pub fn prove_shannon(
    candidate: &LinearInequality,
    n: usize,
    constraints: &[CIConstraint],
) -> Result<ShannonVerdict> {
    check_candidate(candidate, n)?;
    let cone = constrained_cone(n, constraints)?;
    Ok(match implication(&cone, candidate)? {
        Implication::Implied { forward, .. } => ShannonVerdict::Provable {
            system: cone,
            multipliers: forward,
        },
        Implication::NotImplied { witness } => {
            let mut values = vec![Rational::zero(); 1 << n];
            for (s, v) in cone.coordinates().iter().zip(witness) {
                values[s.bits() as usize] = v;
            }
            ShannonVerdict::NotProvable {
                ray: RankVector::new(n, values)?,
            }
        }
    })
}

/// Independent provability checks, run in parallel; results follow the input order.
pub fn prove_all(
    candidates: &[LinearInequality],
    n: usize,
    constraints: &[CIConstraint],
) -> Result<Vec<ShannonVerdict>> {
    candidates
        .par_iter()
        .map(|c| prove_shannon(c, n, constraints))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    /// A point of `Γ_n ∩ face` agreeing with the partial vector on its scenario.
    Feasible(RankVector<Rational>),
    /// A Shannon-type inequality over the scenario (a nonnegative combination of cone
    /// rows) that the partial vector violates.
    Infeasible { violated: LinearInequality },
}

/// Searches for a polymatroid on `[n]` (inside the face) restricting to `partial`.
pub fn extend_partial(
    partial: &PartialRankVector<Rational>,
    n: usize,
    constraints: &[CIConstraint],
) -> Result<Extension> {
    if partial.scenario().n() > n {
        return Err(Error::domain("partial vector lives on a larger ground set"));
    }
    let cone = constrained_cone(n, constraints)?;
    let coords = cone.coordinates();
    let mut lp = LinearProgram::new(vec![VarDomain::Free; coords.len()]);
    for row in cone.rows() {
        let coeffs = row
            .terms()
            .iter()
            .map(|&(s, c)| (cone.coordinate_position(s).expect("supported"), Rational::from_integer(c.into())))
            .collect();
        match row.sense() {
            Sense::GreaterEq => lp.add_ge(coeffs, Rational::zero()),
            Sense::Equal => lp.add_eq(coeffs, Rational::zero()),
        };
    }
    let fixed: Vec<SubsetIndex> = partial.scenario().nonempty_members().to_vec();
    let first_fixed = lp.constraints().len();
    for &s in &fixed {
        let j = cone.coordinate_position(s).expect("subset of [n]");
        lp.add_eq(vec![(j, Rational::from_integer(1.into()))], partial.get(s).expect("member").clone());
    }
    let result = lp.solve()?;
    match result.certificate {
        LpCertificate::Optimal { point, .. } => {
            let mut values = vec![Rational::zero(); 1 << n];
            for (s, v) in coords.iter().zip(point) {
                values[s.bits() as usize] = v;
            }
            Ok(Extension::Feasible(RankVector::new(n, values)?))
        }
        LpCertificate::Farkas { multipliers } => {
            // Σ y_i row_i = −Σ z_S e_S, so −z is a valid inequality that v violates
            let terms = fixed
                .iter()
                .zip(&multipliers[first_fixed..])
                .map(|(s, z)| (*s, -z.clone()));
            Ok(Extension::Infeasible {
                violated: LinearInequality::from_rational(terms, Sense::GreaterEq)?,
            })
        }
        LpCertificate::Ray { .. } => unreachable!("zero objective"),
    }
}
