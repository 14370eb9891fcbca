//! Fourier-Motzkin elimination with equality substitution and Chernikov pruning.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::redundancy::{exact_mask, Redundancy};
use super::{InequalitySystem, LinearInequality, Rational, Sense};
use crate::error::{Error, Result};
use crate::sets::SubsetIndex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectOptions {
    /// Applied after every elimination step.
    pub step: Redundancy,
    /// Applied once to the projected system.
    pub last: Redundancy,
    /// Ancestor-set pruning of derived rows.
    pub chernikov: bool,
    /// Keep a derived row only when its ancestors, restricted to the eliminated
    /// coordinates, have rank one less than their number.
    pub rank_test: bool,
    /// Upper bound on the number of combined row pairs over the whole run.
    pub budget: Option<u64>,
    /// Record, for every output row, multipliers over the input rows.
    pub track_multipliers: bool,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions {
            step: Redundancy::Exact,
            last: Redundancy::Exact,
            chernikov: true,
            rank_test: true,
            budget: Some(10_000_000),
            track_multipliers: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProjectionStats {
    /// Coordinates in the order they were removed.
    pub order: Vec<SubsetIndex>,
    /// Those among `order` removed by substituting an equality.
    pub substituted: Vec<SubsetIndex>,
    /// Row pairs combined.
    pub derived: u64,
    pub chernikov_dropped: u64,
    pub peak_rows: usize,
}

#[derive(Clone, Debug)]
pub struct Projection {
    pub system: InequalitySystem,
    /// `multipliers[r]` lists `(input row, factor)`; the factors are nonnegative on
    /// input inequalities and the combination reproduces output row `r` exactly.
    pub multipliers: Option<Vec<Vec<(usize, Rational)>>>,
    pub stats: ProjectionStats,
}

type Mult = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
struct Row {
    c: Vec<i64>,
    eq: bool,
    anc: Vec<u64>,
    mult: Option<Mult>,
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

fn union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn scale_mult(m: &Mult, f: &Rational) -> Mult {
    m.iter().map(|(i, v)| (*i, v * f)).collect()
}

fn combine_mult(a: &Mult, fa: i128, b: &Mult, fb: i128) -> Mult {
    let fa = Rational::from_integer(fa.into());
    let fb = Rational::from_integer(fb.into());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (idx, v) = if take_a {
            i += 1;
            (a[i - 1].0, &a[i - 1].1 * &fa)
        } else if take_b {
            j += 1;
            (b[j - 1].0, &b[j - 1].1 * &fb)
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, &a[i - 1].1 * &fa + &b[j - 1].1 * &fb)
        };
        if !v.is_zero() {
            out.push((idx, v));
        }
    }
    out
}

impl Row {
    /// `fa·a + fb·b`, normalized. The caller guarantees `fa, fb ≥ 0` whenever the
    /// corresponding row is an inequality.
    fn combine(a: &Row, fa: i64, b: &Row, fb: i64, eq: bool, anc: Vec<u64>) -> Result<Row> {
        let c = a
            .c
            .iter()
            .zip(&b.c)
            .map(|(&x, &y)| fa as i128 * x as i128 + fb as i128 * y as i128)
            .collect::<Vec<i128>>();
        let mult = match (&a.mult, &b.mult) {
            (Some(ma), Some(mb)) => Some(combine_mult(ma, fa as i128, mb, fb as i128)),
            _ => None,
        };
        Row::normalized(c, eq, anc, mult)
    }

    fn normalized(c: Vec<i128>, eq: bool, anc: Vec<u64>, mult: Option<Mult>) -> Result<Row> {
        let g = c.iter().fold(0i128, |g, &x| g.gcd(&x));
        let lead_negative = eq && c.iter().find(|x| **x != 0).is_some_and(|x| *x < 0);
        let g = if g == 0 {
            1
        } else if lead_negative {
            -g
        } else {
            g
        };
        let c = c
            .into_iter()
            .map(|x| i64::try_from(x / g).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<i64>>>()?;
        let mult = mult.map(|m| {
            if g == 1 {
                m
            } else {
                scale_mult(&m, &Rational::new(1.into(), g.into()))
            }
        });
        Ok(Row { c, eq, anc, mult })
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| *x == 0)
    }
}

/// Rank of an integer matrix by fraction-free elimination.
fn rank(mut m: Vec<Vec<i128>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let pivot = m[r].clone();
            let row = &mut m[i];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = *x * a - *y * b;
            }
            let g = row.iter().fold(0i128, |g, x| g.gcd(x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

/// Whether the ancestor combination is an extreme ray of the multiplier cone.
fn extreme(base: &[Option<Vec<i64>>], cols: &[usize], anc: &[u64]) -> bool {
    let mut m = Vec::new();
    for (k, w) in anc.iter().enumerate() {
        let mut w = *w;
        while w != 0 {
            let i = k * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            let Some(row) = &base[i] else {
                return true;
            };
            m.push(cols.iter().map(|&c| row[c] as i128).collect());
        }
    }
    let size = m.len();
    rank(m) + 1 == size
}

struct Engine {
    coords: Vec<SubsetIndex>,
    active: Vec<bool>,
    rows: Vec<Row>,
    n: usize,
    eliminated_by_fm: usize,
    /// Inequalities as they stood before the first pairwise step, by input row.
    base: Option<Vec<Option<Vec<i64>>>>,
    fm_cols: Vec<usize>,
    opts: ProjectOptions,
    stats: ProjectionStats,
}

impl Engine {
    fn new(system: &InequalitySystem, opts: ProjectOptions) -> Engine {
        let coords = system.coordinates().to_vec();
        let words = system.len().div_ceil(64).max(1);
        let rows = system
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut c = vec![0i64; coords.len()];
                for &(s, v) in r.terms() {
                    c[system.coordinate_position(s).expect("supported row")] = v;
                }
                let mut anc = vec![0u64; words];
                if !r.is_equality() {
                    anc[i / 64] |= 1 << (i % 64);
                }
                let mult = opts
                    .track_multipliers
                    .then(|| vec![(i, Rational::one())]);
                Row {
                    c,
                    eq: r.is_equality(),
                    anc,
                    mult,
                }
            })
            .collect::<Vec<_>>();
        let stats = ProjectionStats {
            peak_rows: rows.len(),
            ..Default::default()
        };
        Engine {
            active: vec![true; coords.len()],
            coords,
            rows,
            n: system.n(),
            eliminated_by_fm: 0,
            base: None,
            fm_cols: Vec::new(),
            opts,
            stats,
        }
    }

    fn eliminate_all(&mut self, targets: &[usize]) -> Result<()> {
        let mut remaining: Vec<usize> = targets.to_vec();
        while !remaining.is_empty() {
            if let Some((col, e)) = self.pick_substitution(&remaining) {
                if self.eliminated_by_fm > 0 {
                    // ancestors no longer describe the substituted rows
                    self.opts.rank_test = false;
                }
                self.substitute(col, e)?;
                self.stats.substituted.push(self.coords[col]);
                remaining.retain(|&c| c != col);
                self.finish_step(col, self.opts.step);
                continue;
            }
            let col = self.pick_fm(&remaining);
            self.fm_step(col)?;
            remaining.retain(|&c| c != col);
            self.finish_step(col, self.opts.step);
        }
        Ok(())
    }

    /// First target (canonical order) occurring in an equality, with the sparsest such
    /// equality.
    fn pick_substitution(&self, remaining: &[usize]) -> Option<(usize, usize)> {
        let mut cols: Vec<usize> = remaining.to_vec();
        cols.sort_unstable();
        for col in cols {
            let best = self
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.eq && r.c[col] != 0)
                .min_by_key(|(i, r)| (r.c.iter().filter(|x| **x != 0).count(), *i));
            if let Some((i, _)) = best {
                return Some((col, i));
            }
        }
        None
    }

    fn pick_fm(&self, remaining: &[usize]) -> usize {
        *remaining
            .iter()
            .min_by_key(|&&col| {
                let pos = self.rows.iter().filter(|r| r.c[col] > 0).count() as u64;
                let neg = self.rows.iter().filter(|r| r.c[col] < 0).count() as u64;
                (pos * neg, col)
            })
            .expect("non-empty")
    }

    fn substitute(&mut self, col: usize, e: usize) -> Result<()> {
        let eqrow = self.rows.remove(e);
        let a = eqrow.c[col];
        let mut out = Vec::with_capacity(self.rows.len());
        for r in self.rows.drain(..) {
            if r.c[col] == 0 {
                out.push(r);
                continue;
            }
            // |a|·r − sign(a)·r[col]·e keeps r's multiplier positive
            let fr = a.abs();
            let fe = -a.signum() * r.c[col];
            let anc = r.anc.clone();
            let eq = r.eq;
            out.push(Row::combine(&r, fr, &eqrow, fe, eq, anc)?);
        }
        self.rows = out;
        Ok(())
    }

    fn fm_step(&mut self, col: usize) -> Result<()> {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for r in self.rows.drain(..) {
            match r.c[col].cmp(&0) {
                std::cmp::Ordering::Greater => pos.push(r),
                std::cmp::Ordering::Less => neg.push(r),
                std::cmp::Ordering::Equal => zero.push(r),
            }
        }
        let pairs = (pos.len() * neg.len()) as u64;
        if let Some(limit) = self.opts.budget {
            if self.stats.derived + pairs > limit {
                return Err(Error::BudgetExhausted {
                    derived: self.stats.derived + pairs,
                    limit,
                });
            }
        }
        self.stats.derived += pairs;
        if self.base.is_none() {
            let words = pos.iter().chain(&neg).chain(&zero).next().map_or(0, |r| r.anc.len());
            let mut base = vec![None; words * 64];
            for r in pos.iter().chain(&neg).chain(&zero) {
                if !r.eq && popcount(&r.anc) == 1 {
                    let i = r.anc.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| {
                        k * 64 + w.trailing_zeros() as usize
                    });
                    base[i.expect("singleton")] = Some(r.c.clone());
                }
            }
            self.base = Some(base);
        }
        self.eliminated_by_fm += 1;
        self.fm_cols.push(col);
        let max_anc = (self.eliminated_by_fm + 1) as u32;
        let chernikov = self.opts.chernikov;
        let rank_test = self.opts.rank_test;
        let base = self.base.as_ref().expect("snapshot");
        let fm_cols = &self.fm_cols;
        let combos: Vec<Result<(Vec<Row>, u64)>> = pos
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                let mut dropped = 0u64;
                for q in &neg {
                    let anc = union(&p.anc, &q.anc);
                    if (chernikov || rank_test) && popcount(&anc) > max_anc {
                        dropped += 1;
                        continue;
                    }
                    if rank_test && !extreme(base, fm_cols, &anc) {
                        dropped += 1;
                        continue;
                    }
                    let row = Row::combine(p, -q.c[col], q, p.c[col], false, anc)?;
                    if !row.is_zero() {
                        out.push(row);
                    }
                }
                Ok((out, dropped))
            })
            .collect();
        let mut rows = zero;
        for c in combos {
            let (out, dropped) = c?;
            self.stats.chernikov_dropped += dropped;
            rows.extend(out);
        }
        self.rows = rows;
        Ok(())
    }

    fn finish_step(&mut self, col: usize, policy: Redundancy) {
        self.active[col] = false;
        self.stats.order.push(self.coords[col]);
        self.dedupe();
        if self.opts.chernikov {
            self.prune_ancestors();
        }
        self.apply(policy);
        self.stats.peak_rows = self.stats.peak_rows.max(self.rows.len());
    }

    /// Removes zero rows and duplicates, keeping the copy with the smallest ancestor set;
    /// drops inequalities that restate an equality.
    fn dedupe(&mut self) {
        let mut index: HashMap<(Vec<i64>, bool), usize> = HashMap::new();
        let mut kept: Vec<Row> = Vec::with_capacity(self.rows.len());
        for r in self.rows.drain(..) {
            if r.is_zero() {
                continue;
            }
            let key = (r.c.clone(), r.eq);
            match index.get(&key) {
                Some(&k) => {
                    if popcount(&r.anc) < popcount(&kept[k].anc) {
                        kept[k] = r;
                    }
                }
                None => {
                    index.insert(key, kept.len());
                    kept.push(r);
                }
            }
        }
        let restates_equality = |r: &Row| {
            if r.eq {
                return false;
            }
            let neg: Vec<i64> = r.c.iter().map(|x| -x).collect();
            index.contains_key(&(r.c.clone(), true)) || index.contains_key(&(neg, true))
        };
        kept.retain(|r| !restates_equality(r));
        self.rows = kept;
    }

    /// Drops inequalities whose ancestor set strictly contains another inequality's.
    fn prune_ancestors(&mut self) {
        let counts: Vec<u32> = self.rows.iter().map(|r| popcount(&r.anc)).collect();
        let rows = &self.rows;
        let drop: Vec<bool> = (0..rows.len())
            .into_par_iter()
            .map(|i| {
                !rows[i].eq
                    && rows.iter().enumerate().any(|(j, s)| {
                        !s.eq && counts[j] < counts[i] && subset(&s.anc, &rows[i].anc)
                    })
            })
            .collect();
        let before = self.rows.len();
        let mut it = drop.iter();
        self.rows.retain(|_| !*it.next().unwrap());
        self.stats.chernikov_dropped += (before - self.rows.len()) as u64;
    }

    fn apply(&mut self, policy: Redundancy) {
        if policy != Redundancy::Exact {
            return;
        }
        let system = self.as_system();
        debug_assert_eq!(system.len(), self.rows.len());
        let mask = exact_mask(&system);
        if mask.iter().all(|k| *k) {
            return;
        }
        let mut it = mask.iter();
        self.rows.retain(|_| *it.next().unwrap());
        self.reseed_ancestors();
    }

    /// Treats the current rows as a fresh input. Ancestor sets of rows that survived a
    /// removal pass no longer bound the multiplier supports of later combinations.
    fn reseed_ancestors(&mut self) {
        let words = self.rows.len().div_ceil(64).max(1);
        for (i, r) in self.rows.iter_mut().enumerate() {
            r.anc = vec![0u64; words];
            if !r.eq {
                r.anc[i / 64] |= 1 << (i % 64);
            }
        }
        self.eliminated_by_fm = 0;
        self.base = None;
        self.fm_cols.clear();
    }

    fn active_coords(&self) -> Vec<SubsetIndex> {
        self.coords
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(c, _)| *c)
            .collect()
    }

    fn to_inequality(&self, r: &Row) -> LinearInequality {
        let terms = self
            .coords
            .iter()
            .zip(&r.c)
            .filter(|(_, v)| **v != 0)
            .map(|(s, v)| (*s, *v));
        let sense = if r.eq { Sense::Equal } else { Sense::GreaterEq };
        LinearInequality::new(terms, sense).expect("nonzero normalized row")
    }

    fn as_system(&self) -> InequalitySystem {
        let rows = self.rows.iter().map(|r| self.to_inequality(r)).collect();
        InequalitySystem::new(self.n, self.active_coords(), rows).expect("active support")
    }

    fn finish(mut self) -> Projection {
        // canonical order first, so the final pass is order-independent of the run
        let rows = std::mem::take(&mut self.rows);
        let mut paired: Vec<(LinearInequality, Row)> =
            rows.into_iter().map(|r| (self.to_inequality(&r), r)).collect();
        paired.sort_by(|a, b| a.0.cmp(&b.0));
        self.rows = paired.into_iter().map(|(_, r)| r).collect();
        let last = self.opts.last;
        if last == Redundancy::Pairwise {
            self.dedupe();
        }
        self.apply(last);
        let system = self.as_system();
        let multipliers = self
            .opts
            .track_multipliers
            .then(|| self.rows.iter().map(|r| r.mult.clone().unwrap_or_default()).collect());
        Projection {
            system,
            multipliers,
            stats: self.stats,
        }
    }
}

fn positions(system: &InequalitySystem, subsets: &[SubsetIndex]) -> Result<Vec<usize>> {
    subsets
        .iter()
        .map(|s| {
            system
                .coordinate_position(*s)
                .ok_or_else(|| Error::domain(format!("{s:?} is not a coordinate of the system")))
        })
        .collect()
}

/// Eliminates one coordinate. The result's solution set is the projection of the input's.
pub fn fm_eliminate(system: &InequalitySystem, coord: SubsetIndex) -> Result<InequalitySystem> {
    let col = positions(system, &[coord])?[0];
    let opts = ProjectOptions {
        step: Redundancy::None,
        last: Redundancy::None,
        chernikov: false,
        rank_test: false,
        budget: None,
        track_multipliers: false,
    };
    let mut engine = Engine::new(system, opts);
    engine.eliminate_all(&[col])?;
    Ok(engine.finish().system)
}

/// Projects onto `keep`, applying `redundancy` after every step and to the result.
pub fn project(
    system: &InequalitySystem,
    keep: &[SubsetIndex],
    redundancy: Redundancy,
) -> Result<InequalitySystem> {
    let opts = ProjectOptions {
        step: redundancy,
        last: redundancy,
        ..ProjectOptions::default()
    };
    Ok(project_with(system, keep, &opts)?.system)
}

pub fn project_with(
    system: &InequalitySystem,
    keep: &[SubsetIndex],
    opts: &ProjectOptions,
) -> Result<Projection> {
    positions(system, keep)?;
    let targets: Vec<usize> = system
        .coordinates()
        .iter()
        .enumerate()
        .filter(|(_, s)| !keep.contains(s))
        .map(|(i, _)| i)
        .collect();
    let mut engine = Engine::new(system, opts.clone());
    engine.eliminate_all(&targets)?;
    Ok(engine.finish())
}
