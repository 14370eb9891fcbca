//! Dense two-phase primal simplex on `min c·x, A x = b, x ≥ 0` with Bland's rule.
//!
//! The tableau carries one artificial column per row for the whole run, so
//! `B⁻¹` (and with it dual and Farkas multipliers) can be read off at the end.
//! The solver is generic over a checked scalar: callers try `Ratio<i128>` first
//! and redo the solve in `BigRational` when any operation overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

pub(crate) trait Scalar: Clone + Send + Sync + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn sign(&self) -> Ordering;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn compare(&self, o: &Self) -> Ordering;
    fn from_big(b: &BigRational) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

pub(crate) type Small = Ratio<i128>;

const SMALL_LIMIT: u128 = 1 << 120;

fn bounded(r: &Small) -> bool {
    r.numer().unsigned_abs() < SMALL_LIMIT && r.denom().unsigned_abs() < SMALL_LIMIT
}

impl Scalar for Small {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> Ordering {
        self.numer().cmp(&0)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o).filter(bounded)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o).filter(bounded)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        self.checked_div(o).filter(bounded)
    }
    fn compare(&self, o: &Self) -> Ordering {
        // Ratio's Ord cross-multiplies through a continued-fraction walk; no overflow.
        self.cmp(o)
    }
    fn from_big(b: &BigRational) -> Option<Self> {
        let n = b.numer().to_i128()?;
        let d = b.denom().to_i128()?;
        Some(Ratio::new_raw(n, d)).filter(bounded)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn compare(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn from_big(b: &BigRational) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// `min c·x` subject to `A x = b`, `x ≥ 0`. `a` is row-major and sparse per row.
#[derive(Clone, Debug)]
pub(crate) struct StandardForm {
    pub rows: Vec<Vec<(usize, BigRational)>>,
    pub rhs: Vec<BigRational>,
    pub cost: Vec<(usize, BigRational)>,
    pub ncols: usize,
}

#[derive(Clone, Debug)]
pub(crate) enum StdOutcome {
    Optimal {
        x: Vec<BigRational>,
        /// Row multipliers with `Aᵀy ≤ c` and `b·y` equal to the optimum.
        y: Vec<BigRational>,
        value: BigRational,
    },
    /// `yᵀA ≤ 0` and `b·y > 0`.
    Infeasible { y: Vec<BigRational> },
    /// `x` feasible, `A d = 0`, `d ≥ 0`, `c·d < 0`.
    Unbounded {
        x: Vec<BigRational>,
        d: Vec<BigRational>,
    },
}

pub(crate) fn solve(lp: &StandardForm) -> StdOutcome {
    if let Some(out) = solve_in::<Small>(lp) {
        return out;
    }
    solve_in::<BigRational>(lp).expect("arbitrary precision cannot overflow")
}

struct Tableau<T> {
    m: usize,
    /// structural columns followed by `m` artificial columns
    width: usize,
    structural: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    /// minus the current objective value
    obj_rhs: T,
    basis: Vec<usize>,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, s: usize) -> Option<()> {
        let p = self.rows[r][s].clone();
        let mut pivot_row = Vec::new();
        for j in 0..self.width {
            if !self.rows[r][j].is_zero() {
                let v = self.rows[r][j].div(&p)?;
                self.rows[r][j] = v.clone();
                pivot_row.push((j, v));
            }
        }
        self.rhs[r] = self.rhs[r].div(&p)?;
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r || self.rows[i][s].is_zero() {
                continue;
            }
            let f = self.rows[i][s].clone();
            let row = &mut self.rows[i];
            for (j, v) in &pivot_row {
                row[*j] = row[*j].sub(&f.mul(v)?)?;
            }
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs)?)?;
        }
        if !self.obj[s].is_zero() {
            let f = self.obj[s].clone();
            for (j, v) in &pivot_row {
                self.obj[*j] = self.obj[*j].sub(&f.mul(v)?)?;
            }
            self.obj_rhs = self.obj_rhs.sub(&f.mul(&prhs)?)?;
        }
        self.basis[r] = s;
        Some(())
    }

    /// Runs Bland-rule pivots over columns `< allowed` until optimal or unbounded.
    fn run(&mut self, allowed: usize) -> Option<Step> {
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j].sign() == Ordering::Less);
            let Some(s) = entering else {
                return Some(Step::Optimal);
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.m {
                if self.rows[i][s].sign() != Ordering::Greater {
                    continue;
                }
                let ratio = self.rhs[i].div(&self.rows[i][s])?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.compare(br) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Some(Step::Unbounded(s)),
                Some((r, _)) => self.pivot(r, s)?,
            }
        }
    }

    fn primal(&self) -> Vec<BigRational> {
        let mut x = vec![<BigRational as Zero>::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rhs[i].to_big();
            }
        }
        x
    }
}

fn solve_in<T: Scalar>(lp: &StandardForm) -> Option<StdOutcome> {
    let m = lp.rows.len();
    let n = lp.ncols;
    let width = n + m;
    let mut rows = vec![vec![T::zero(); width]; m];
    let mut rhs = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    for (i, row) in lp.rows.iter().enumerate() {
        let b = T::from_big(&lp.rhs[i])?;
        let flip = b.sign() == Ordering::Less;
        flipped[i] = flip;
        for (j, v) in row {
            let v = T::from_big(v)?;
            rows[i][*j] = if flip { T::zero().sub(&v)? } else { v };
        }
        rows[i][n + i] = T::one();
        rhs.push(if flip { T::zero().sub(&b)? } else { b });
    }

    // Phase 1: minimise the sum of artificials, priced out against the artificial basis.
    let mut obj = vec![T::zero(); width];
    let mut obj_rhs = T::zero();
    for i in 0..m {
        for j in 0..n {
            if !rows[i][j].is_zero() {
                obj[j] = obj[j].sub(&rows[i][j])?;
            }
        }
        obj_rhs = obj_rhs.sub(&rhs[i])?;
    }
    let mut t = Tableau {
        m,
        width,
        structural: n,
        rows,
        rhs,
        obj,
        obj_rhs,
        basis: (n..n + m).collect(),
    };
    match t.run(n)? {
        Step::Optimal => {}
        Step::Unbounded(_) => unreachable!("phase 1 objective is bounded below by 0"),
    }
    let unflip = |v: BigRational, i: usize| if flipped[i] { -v } else { v };
    if t.obj_rhs.sign() == Ordering::Less {
        // reduced cost of artificial i is 1 - y_i
        let y = (0..m)
            .map(|i| unflip(<BigRational as One>::one() - t.obj[n + i].to_big(), i))
            .collect();
        return Some(StdOutcome::Infeasible { y });
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(s) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, s)?;
            }
        }
    }

    // Phase 2 objective row: c - c_B B⁻¹ A, artificials carry zero cost.
    let mut cost = vec![T::zero(); width];
    for (j, v) in &lp.cost {
        cost[*j] = T::from_big(v)?;
    }
    t.obj = cost.clone();
    t.obj_rhs = T::zero();
    for i in 0..m {
        let cb = &cost[t.basis[i]];
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            if !t.rows[i][j].is_zero() {
                t.obj[j] = t.obj[j].sub(&cb.mul(&t.rows[i][j])?)?;
            }
        }
        t.obj_rhs = t.obj_rhs.sub(&cb.mul(&t.rhs[i])?)?;
    }
    match t.run(n)? {
        Step::Optimal => {
            let y = (0..m)
                .map(|i| unflip(-t.obj[n + i].to_big(), i))
                .collect();
            Some(StdOutcome::Optimal {
                x: t.primal(),
                y,
                value: -t.obj_rhs.to_big(),
            })
        }
        Step::Unbounded(s) => {
            let mut d = vec![<BigRational as Zero>::zero(); n];
            d[s] = <BigRational as One>::one();
            for i in 0..m {
                let b = t.basis[i];
                if b < n {
                    d[b] = -t.rows[i][s].to_big();
                }
            }
            Some(StdOutcome::Unbounded { x: t.primal(), d })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + s1 = 2, y + s2 = 3
        let lp = StandardForm {
            rows: vec![vec![(0, q(1)), (2, q(1))], vec![(1, q(1)), (3, q(1))]],
            rhs: vec![q(2), q(3)],
            cost: vec![(0, q(-1)), (1, q(-1))],
            ncols: 4,
        };
        match solve(&lp) {
            StdOutcome::Optimal { x, y, value } => {
                assert_eq!(value, q(-5));
                assert_eq!(&x[..2], &[q(2), q(3)]);
                assert_eq!(y, vec![q(-1), q(-1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_with_farkas() {
        // x = 1 and x = 2
        let lp = StandardForm {
            rows: vec![vec![(0, q(1))], vec![(0, q(1))]],
            rhs: vec![q(1), q(2)],
            cost: vec![],
            ncols: 1,
        };
        match solve(&lp) {
            StdOutcome::Infeasible { y } => {
                assert!(&y[0] + &y[1] <= q(0));
                assert!(&y[0] * q(1) + &y[1] * q(2) > q(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        // min -x s.t. x - s = 0
        let lp = StandardForm {
            rows: vec![vec![(0, q(1)), (1, q(-1))]],
            rhs: vec![q(0)],
            cost: vec![(0, q(-1))],
            ncols: 2,
        };
        match solve(&lp) {
            StdOutcome::Unbounded { d, .. } => {
                assert!(d[0] > q(0));
                assert_eq!(&d[0] - &d[1], q(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn big_values_fall_back() {
        let huge = BigRational::from_integer(BigInt::from(10).pow(60));
        let lp = StandardForm {
            rows: vec![vec![(0, q(1))]],
            rhs: vec![huge.clone()],
            cost: vec![(0, q(1))],
            ncols: 1,
        };
        match solve(&lp) {
            StdOutcome::Optimal { value, .. } => assert_eq!(value, huge),
            other => panic!("{other:?}"),
        }
    }
}
