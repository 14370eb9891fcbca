use num_traits::ToPrimitive;

use crate::entropy::{JointDistribution, PartialRankVector};
use crate::error::{Error, Result};
use crate::polyhedra::{InequalitySystem, LinearInequality, RankValue, Rational};
use crate::sets::{Scenario, SubsetIndex};

/// `{i, i+1}` with `n + 1` read as `1`.
fn edge(n: usize, i: usize) -> SubsetIndex {
    SubsetIndex::of(&[i, i % n + 1])
}

fn single(i: usize) -> SubsetIndex {
    SubsetIndex::singleton(i)
}

/// The `n` cycle rows, row `i − 1` being
/// `Σ_{j≠i} f({j,j+1}) − f({i,i+1}) − Σ_{j∉{i,i+1}} f({j}) ≥ 0`.
pub fn cycle_inequalities(n: usize) -> Result<InequalitySystem> {
    let scenario = Scenario::cycle(n)?;
    let rows = (1..=n)
        .map(|i| {
            let mut terms: Vec<(SubsetIndex, i64)> = Vec::new();
            for j in 1..=n {
                terms.push((edge(n, j), if j == i { -1 } else { 1 }));
                if j != i && j != i % n + 1 {
                    terms.push((single(j), -1));
                }
            }
            LinearInequality::ge(terms)
        })
        .collect();
    InequalitySystem::new(n, scenario.nonempty_members().to_vec(), rows)
}

/// Nonnegativity of singletons, monotonicity along edges and submodularity of each edge,
/// grouped by edge.
pub fn local_basic_inequalities(n: usize) -> Result<InequalitySystem> {
    let scenario = Scenario::cycle(n)?;
    let mut rows = Vec::new();
    for i in 1..=n {
        let (a, b, e) = (single(i), single(i % n + 1), edge(n, i));
        rows.push(LinearInequality::ge([(a, 1)]));
        rows.push(LinearInequality::ge([(e, 1), (a, -1)]));
        rows.push(LinearInequality::ge([(e, 1), (b, -1)]));
        rows.push(LinearInequality::ge([(a, 1), (b, 1), (e, -1)]));
    }
    InequalitySystem::new(n, scenario.nonempty_members().to_vec(), rows)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CycleVerdict<T> {
    NonContextual,
    /// Violated rows as `(i, value)` with `i` in `1..=n`.
    Contextual { violations: Vec<(usize, T)> },
}

impl<T> CycleVerdict<T> {
    pub fn is_contextual(&self) -> bool {
        matches!(self, CycleVerdict::Contextual { .. })
    }
}

fn cycle_n(scenario: &Scenario) -> Result<usize> {
    let n = scenario.n();
    if n >= 3 && *scenario == Scenario::cycle(n)? {
        Ok(n)
    } else {
        Err(Error::domain("vector is not defined on an n-cycle scenario"))
    }
}

/// Decides contextuality of a partial polymatroid on `C_n` by the cycle rows.
pub fn check_cycle_contextuality<T: RankValue>(
    v: &PartialRankVector<T>,
    tolerance: f64,
) -> Result<CycleVerdict<T>> {
    let n = cycle_n(v.scenario())?;
    let value = |s: SubsetIndex| v.get(s).cloned();
    let local = local_basic_inequalities(n)?;
    if let Some((k, _)) = local
        .violations(value, tolerance)
        .expect("complete vector")
        .first()
    {
        return Err(Error::domain(format!(
            "local basic inequality {} fails",
            local.rows()[*k]
        )));
    }
    let violations: Vec<(usize, T)> = cycle_inequalities(n)?
        .violations(value, tolerance)
        .expect("complete vector")
        .into_iter()
        .map(|(k, t)| (k + 1, t))
        .collect();
    Ok(if violations.is_empty() {
        CycleVerdict::NonContextual
    } else {
        CycleVerdict::Contextual { violations }
    })
}

/// Writes an integer partial polymatroid on `C_n` satisfying the cycle rows as a sum of
/// 0/1 rank functions `g_A(S) = [S ∩ A ≠ ∅]`, returning the blocks `A` with repetition.
///
/// Every `A` is `[n]` or a cyclic interval.
pub fn cycle_decomposition(v: &PartialRankVector<Rational>) -> Result<Vec<SubsetIndex>> {
    let n = cycle_n(v.scenario())?;
    let members = v.scenario().nonempty_members().to_vec();
    let mut f: Vec<i64> = Vec::with_capacity(members.len());
    for &s in &members {
        let x = v.get(s).expect("member");
        if !x.is_integer() {
            return Err(Error::domain(format!("value at {s:?} is not an integer")));
        }
        f.push(x.to_integer().to_i64().ok_or(Error::Overflow)?);
    }
    let system = local_basic_inequalities(n)?.with_rows(cycle_inequalities(n)?.rows().to_vec())?;
    let rows: Vec<Vec<(usize, i64)>> = system
        .rows()
        .iter()
        .map(|r| {
            r.terms()
                .iter()
                .map(|&(s, c)| (members.binary_search(&s).expect("member"), c))
                .collect()
        })
        .collect();
    let feasible = |f: &[i64]| {
        rows.iter()
            .all(|r| r.iter().map(|&(k, c)| c * f[k]).sum::<i64>() >= 0)
    };
    if !feasible(&f) {
        return Err(Error::domain("vector violates a local basic or cycle inequality"));
    }

    let mut candidates = vec![SubsetIndex::full(n)];
    for len in 1..n {
        for start in 1..=n {
            candidates.push(SubsetIndex::of(
                &(0..len).map(|k| (start - 1 + k) % n + 1).collect::<Vec<_>>(),
            ));
        }
    }
    let g: Vec<Vec<i64>> = candidates
        .iter()
        .map(|a| members.iter().map(|s| i64::from(!s.is_disjoint(*a))).collect())
        .collect();

    let mut blocks = Vec::new();
    while f.iter().any(|x| *x != 0) {
        let step = (0..candidates.len()).find_map(|k| {
            let next: Vec<i64> = f.iter().zip(&g[k]).map(|(a, b)| a - b).collect();
            feasible(&next).then_some((k, next))
        });
        match step {
            Some((k, next)) => {
                blocks.push(candidates[k]);
                f = next;
            }
            None => return Err(Error::domain("no block can be split off")),
        }
    }
    Ok(blocks)
}

/// Joint distribution of `n` variables built from one independent uniform bit per block:
/// variable `i` is the tuple of the bits of the blocks containing it.
///
/// Its entropy on `S` is the number of blocks meeting `S`.
pub fn bit_block_model(n: usize, blocks: &[SubsetIndex]) -> Result<JointDistribution> {
    const MAX_BLOCKS: usize = 20;
    if blocks.len() > MAX_BLOCKS {
        return Err(Error::domain(format!("at most {MAX_BLOCKS} blocks are supported")));
    }
    let full = SubsetIndex::full(n);
    if let Some(b) = blocks.iter().find(|b| !b.is_subset_of(full)) {
        return Err(Error::domain(format!("block {b:?} outside [{n}]")));
    }
    let owned: Vec<Vec<usize>> = (1..=n)
        .map(|i| (0..blocks.len()).filter(|&k| blocks[k].contains(i)).collect())
        .collect();
    let alphabets: Vec<Vec<String>> = owned
        .iter()
        .map(|ks| {
            if ks.is_empty() {
                return vec!["-".to_string()];
            }
            (0..1u32 << ks.len())
                .map(|x| (0..ks.len()).map(|b| if x >> (ks.len() - 1 - b) & 1 == 1 { '1' } else { '0' }).collect())
                .collect()
        })
        .collect();
    let outcomes: Vec<Vec<u32>> = (0..1u32 << blocks.len())
        .map(|bits| {
            owned
                .iter()
                .map(|ks| ks.iter().fold(0u32, |acc, &k| acc << 1 | (bits >> k & 1)))
                .collect()
        })
        .collect();
    JointDistribution::uniform_over(full, alphabets, &outcomes)
}
