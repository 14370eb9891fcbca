use crate::cones::{BayesNet, CIConstraint};
use crate::entropy::{JointDistribution, MarginalModel, PartialRankVector};
use crate::polyhedra::{rational, LinearInequality, Rational};
use crate::sets::{Scenario, SubsetIndex, ZY_W, ZY_X, ZY_Y, ZY_Z};

fn coins() -> Vec<String> {
    vec!["heads".to_string(), "tails".to_string()]
}

#[derive(Copy, Clone)]
enum Pair {
    Equal,
    Opposite,
    Independent,
}

fn pair_table(a: usize, b: usize, kind: Pair) -> JointDistribution {
    let outcomes: Vec<Vec<u32>> = match kind {
        Pair::Equal => vec![vec![0, 0], vec![1, 1]],
        Pair::Opposite => vec![vec![0, 1], vec![1, 0]],
        Pair::Independent => vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
    };
    JointDistribution::uniform_over(SubsetIndex::of(&[a, b]), vec![coins(); 2], &outcomes)
        .expect("valid table")
}

/// Coins on `C_n`: every edge perfectly correlated except `{1, n}`, which is `last`.
fn coin_cycle(n: usize, last: Pair) -> MarginalModel {
    let scenario = Scenario::cycle(n).expect("n >= 3");
    let closing = SubsetIndex::of(&[1, n]);
    let tables = scenario
        .generators()
        .iter()
        .map(|&g| {
            let mut e = g.elements();
            let (a, b) = (e.next().expect("pair"), e.next().expect("pair"));
            pair_table(a, b, if g == closing { last } else { Pair::Equal })
        })
        .collect();
    MarginalModel::from_generators(scenario, tables).expect("compatible fixture")
}

/// Three coins, pairs `{1,2}` and `{2,3}` equal, pair `{1,3}` opposite.
pub fn trianglebox() -> MarginalModel {
    coin_cycle(3, Pair::Opposite)
}

/// Three coins, pairs `{1,2}` and `{2,3}` equal, pair `{1,3}` independent.
pub fn triangle_puc() -> MarginalModel {
    coin_cycle(3, Pair::Independent)
}

/// Three perfectly correlated coins.
pub fn triangle_correlated() -> MarginalModel {
    coin_cycle(3, Pair::Equal)
}

/// Coins on `C_n` with consecutive pairs equal and `{1, n}` independent.
pub fn cycle_contextual_model(n: usize) -> crate::Result<MarginalModel> {
    if n < 3 {
        return Err(crate::Error::domain("cycle model needs n >= 3"));
    }
    Ok(coin_cycle(n, Pair::Independent))
}

fn s(e: &[usize]) -> SubsetIndex {
    SubsetIndex::of(e)
}

/// The Zhang-Yeung inequality over the coordinates of the `{wyz, xyz, wx}` scenario.
pub fn zhang_yeung() -> LinearInequality {
    let (w, x, y, z) = (ZY_W, ZY_X, ZY_Y, ZY_Z);
    LinearInequality::ge([
        (s(&[w, y, z]), -4),
        (s(&[x, y, z]), -1),
        (s(&[w, x]), -1),
        (s(&[w, y]), 3),
        (s(&[w, z]), 3),
        (s(&[x, y]), 1),
        (s(&[x, z]), 1),
        (s(&[y, z]), 3),
        (s(&[w]), -1),
        (s(&[y]), -2),
        (s(&[z]), -2),
    ])
}

/// Singletons 2, `{w,x}` 4, other pairs 3, both triples 4.
pub fn fzy_fixture() -> PartialRankVector<Rational> {
    let wx = s(&[ZY_W, ZY_X]);
    PartialRankVector::from_fn(Scenario::zhang_yeung(), |t| match t.len() {
        0 => rational(0),
        1 => rational(2),
        2 if t == wx => rational(4),
        2 => rational(3),
        _ => rational(4),
    })
    .expect("fixed fixture")
}

/// Four independent bits `α_a, α_b, α_c, β`; variable `i` is `(α_i, β)`.
fn shared_bit_triple(a: usize, b: usize, c: usize) -> JointDistribution {
    let labels: Vec<String> = ["00", "01", "10", "11"].iter().map(|l| l.to_string()).collect();
    let mut outcomes = Vec::with_capacity(16);
    for bits in 0..16u32 {
        let beta = bits & 1;
        let alpha = |k: u32| (bits >> k & 1) << 1 | beta;
        let mut vars = [(a, alpha(1)), (b, alpha(2)), (c, alpha(3))];
        vars.sort();
        outcomes.push(vars.iter().map(|v| v.1).collect());
    }
    JointDistribution::uniform_over(s(&[a, b, c]), vec![labels; 3], &outcomes).expect("valid table")
}

/// A marginal model whose entropies are [`fzy_fixture`].
pub fn realize_zy_model() -> MarginalModel {
    let scenario = Scenario::zhang_yeung();
    let labels: Vec<String> = ["00", "01", "10", "11"].iter().map(|l| l.to_string()).collect();
    let wx: Vec<Vec<u32>> = (0..16u32).map(|k| vec![k >> 2, k & 3]).collect();
    let tables = scenario
        .generators()
        .iter()
        .map(|&g| {
            if g == s(&[ZY_W, ZY_X]) {
                JointDistribution::uniform_over(g, vec![labels.clone(); 2], &wx).expect("valid table")
            } else if g.contains(ZY_W) {
                shared_bit_triple(ZY_W, ZY_Y, ZY_Z)
            } else {
                shared_bit_triple(ZY_X, ZY_Y, ZY_Z)
            }
        })
        .collect();
    MarginalModel::from_generators(scenario, tables).expect("compatible fixture")
}

/// Observed variables of [`figure_baynet`].
pub const FIGURE_BAYNET_OBSERVED: [usize; 3] = [1, 3, 5];

/// Six vertices; hidden 2, 4, 6 each feed two of the observed 1, 3, 5.
pub fn figure_baynet() -> BayesNet {
    BayesNet::new(6, vec![(2, 1), (2, 3), (4, 3), (4, 5), (6, 5), (6, 1)]).expect("acyclic")
}

/// The six pairwise conditions stated for [`figure_baynet`]: `I(2:4)`, `I(4:6)`, `I(6:2)`,
/// `I(3:6|24)`, `I(5:2|46)`, `I(1:4|62)`.
pub fn figure_baynet_listed_constraints() -> Vec<CIConstraint> {
    let c = |a: &[usize], b: &[usize], r: &[usize]| CIConstraint::new(s(a), s(b), s(r)).expect("disjoint");
    vec![
        c(&[2], &[4], &[]),
        c(&[4], &[6], &[]),
        c(&[6], &[2], &[]),
        c(&[3], &[6], &[2, 4]),
        c(&[5], &[2], &[4, 6]),
        c(&[1], &[4], &[6, 2]),
    ]
}

/// `2H(135) − H(1) − H(3) − H(5) ≥ 0`.
pub fn commoninfo() -> LinearInequality {
    LinearInequality::ge([(s(&[1, 3, 5]), 2), (s(&[1]), -1), (s(&[3]), -1), (s(&[5]), -1)])
}

/// `H(13) + H(35) − H(1) − H(3) − H(5) ≥ 0`.
pub fn commoninfo2() -> LinearInequality {
    LinearInequality::ge([
        (s(&[1, 3]), 1),
        (s(&[3, 5]), 1),
        (s(&[1]), -1),
        (s(&[3]), -1),
        (s(&[5]), -1),
    ])
}
