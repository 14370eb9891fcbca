//! Exact linear programs in general form, with certificates for every outcome.

use num_traits::{One, Signed, Zero};

use super::simplex::{self, StandardForm, StdOutcome};
use super::{InequalitySystem, Rational, Sense};
use crate::error::{Error, Result};
use crate::sets::SubsetIndex;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VarDomain {
    Free,
    NonNegative,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// `Σ coeffs·x ≥ rhs` or `Σ coeffs·x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    domains: Vec<VarDomain>,
    constraints: Vec<LpConstraint>,
    objective: Vec<(usize, Rational)>,
    direction: Direction,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpCertificate {
    /// Optimal point plus constraint multipliers `y` with `Σ y_i a_i = c` on free
    /// variables. When minimizing, `≤ c` on non-negative ones and `y_i ≥ 0` on `≥` rows;
    /// both signs flip when maximizing. `Σ y_i b_i` equals the optimum.
    Optimal {
        point: Vec<Rational>,
        duals: Vec<Rational>,
    },
    /// Farkas multipliers: `y_i ≥ 0` on `≥` rows, `Σ y_i a_i = 0` on free variables,
    /// `≤ 0` on non-negative ones, and `Σ y_i b_i > 0`.
    Farkas { multipliers: Vec<Rational> },
    /// A feasible point and a recession direction improving the objective without bound.
    Ray {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    pub certificate: LpCertificate,
}

impl LinearProgram {
    pub fn new(domains: Vec<VarDomain>) -> Self {
        LinearProgram {
            domains,
            constraints: Vec::new(),
            objective: Vec::new(),
            direction: Direction::Minimize,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn constraints(&self) -> &[LpConstraint] {
        &self.constraints
    }

    pub fn add_ge(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> usize {
        self.push(coeffs, Sense::GreaterEq, rhs)
    }

    /// Stored as the negated `≥` row.
    pub fn add_le(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> usize {
        let coeffs = coeffs.into_iter().map(|(j, v)| (j, -v)).collect();
        self.push(coeffs, Sense::GreaterEq, -rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> usize {
        self.push(coeffs, Sense::Equal, rhs)
    }

    fn push(&mut self, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> usize {
        self.constraints.push(LpConstraint { coeffs, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>, direction: Direction) {
        self.objective = coeffs;
        self.direction = direction;
    }

    fn validate(&self) -> Result<()> {
        let n = self.domains.len();
        let bad = self
            .constraints
            .iter()
            .flat_map(|c| c.coeffs.iter())
            .chain(self.objective.iter())
            .any(|(j, _)| *j >= n);
        if bad {
            return Err(Error::domain("variable index out of range in linear program"));
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpResult> {
        self.validate()?;
        // column layout: variables (free ones split in two), then one surplus per ≥ row
        let mut col_of = Vec::with_capacity(self.domains.len());
        let mut ncols = 0;
        for d in &self.domains {
            col_of.push(ncols);
            ncols += match d {
                VarDomain::Free => 2,
                VarDomain::NonNegative => 1,
            };
        }
        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut rhs = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut row = Vec::new();
            for (j, v) in &c.coeffs {
                if v.is_zero() {
                    continue;
                }
                row.push((col_of[*j], v.clone()));
                if self.domains[*j] == VarDomain::Free {
                    row.push((col_of[*j] + 1, -v.clone()));
                }
            }
            if c.sense == Sense::GreaterEq {
                row.push((ncols, -Rational::one()));
                ncols += 1;
            }
            rows.push(merge(row));
            rhs.push(c.rhs.clone());
        }
        let flip = self.direction == Direction::Maximize;
        let mut cost = Vec::new();
        for (j, v) in &self.objective {
            let v = if flip { -v.clone() } else { v.clone() };
            cost.push((col_of[*j], v.clone()));
            if self.domains[*j] == VarDomain::Free {
                cost.push((col_of[*j] + 1, -v));
            }
        }
        let std = StandardForm {
            rows,
            rhs,
            cost: merge(cost),
            ncols,
        };
        let recover = |x: &[Rational]| -> Vec<Rational> {
            self.domains
                .iter()
                .enumerate()
                .map(|(j, d)| match d {
                    VarDomain::Free => &x[col_of[j]] - &x[col_of[j] + 1],
                    VarDomain::NonNegative => x[col_of[j]].clone(),
                })
                .collect()
        };
        Ok(match simplex::solve(&std) {
            StdOutcome::Optimal { x, y, value } => {
                let (value, duals) = if flip {
                    (-value, y.into_iter().map(|v| -v).collect())
                } else {
                    (value, y)
                };
                LpResult {
                    status: LpStatus::Optimal,
                    optimum: Some(value),
                    certificate: LpCertificate::Optimal {
                        point: recover(&x),
                        duals,
                    },
                }
            }
            StdOutcome::Infeasible { y } => LpResult {
                status: LpStatus::Infeasible,
                optimum: None,
                certificate: LpCertificate::Farkas { multipliers: y },
            },
            StdOutcome::Unbounded { x, d } => LpResult {
                status: LpStatus::Unbounded,
                optimum: None,
                certificate: LpCertificate::Ray {
                    point: recover(&x),
                    direction: recover(&d),
                },
            },
        })
    }

    fn row_value(c: &LpConstraint, x: &[Rational]) -> Rational {
        c.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j])
    }

    /// Every constraint holds exactly at `x` and non-negative variables are non-negative.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.domains.len() {
            return false;
        }
        let domains_ok = self
            .domains
            .iter()
            .zip(x)
            .all(|(d, v)| *d == VarDomain::Free || !v.is_negative());
        domains_ok
            && self.constraints.iter().all(|c| {
                let v = Self::row_value(c, x);
                match c.sense {
                    Sense::GreaterEq => v >= c.rhs,
                    Sense::Equal => v == c.rhs,
                }
            })
    }

    fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j])
    }

    /// `Σ y_i a_i` as a dense vector over the variables.
    fn combine(&self, y: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.domains.len()];
        for (c, yi) in self.constraints.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, v) in &c.coeffs {
                acc[*j] += v * yi;
            }
        }
        acc
    }

    /// Checks a result's certificate by direct substitution.
    pub fn verify(&self, result: &LpResult) -> bool {
        let m = self.constraints.len();
        match (&result.status, &result.certificate) {
            (LpStatus::Optimal, LpCertificate::Optimal { point, duals }) => {
                let Some(opt) = &result.optimum else {
                    return false;
                };
                if !self.is_feasible_point(point) || &self.objective_value(point) != opt {
                    return false;
                }
                if duals.len() != m {
                    return false;
                }
                let maximize = self.direction == Direction::Maximize;
                let sign_ok = self.constraints.iter().zip(duals).all(|(c, y)| {
                    c.sense == Sense::Equal
                        || if maximize {
                            !y.is_positive()
                        } else {
                            !y.is_negative()
                        }
                });
                let mut cost = vec![Rational::zero(); self.domains.len()];
                for (j, v) in &self.objective {
                    cost[*j] += v;
                }
                let comb = self.combine(duals);
                let stationarity = self.domains.iter().enumerate().all(|(j, d)| match d {
                    VarDomain::Free => comb[j] == cost[j],
                    VarDomain::NonNegative if maximize => comb[j] >= cost[j],
                    VarDomain::NonNegative => comb[j] <= cost[j],
                });
                let by = self
                    .constraints
                    .iter()
                    .zip(duals)
                    .fold(Rational::zero(), |acc, (c, y)| acc + &c.rhs * y);
                sign_ok && stationarity && &by == opt
            }
            (LpStatus::Infeasible, LpCertificate::Farkas { multipliers }) => {
                if multipliers.len() != m {
                    return false;
                }
                let sign_ok = self
                    .constraints
                    .iter()
                    .zip(multipliers)
                    .all(|(c, y)| c.sense == Sense::Equal || !y.is_negative());
                let comb = self.combine(multipliers);
                let cols_ok = self.domains.iter().zip(&comb).all(|(d, v)| match d {
                    VarDomain::Free => v.is_zero(),
                    VarDomain::NonNegative => !v.is_positive(),
                });
                let by = self
                    .constraints
                    .iter()
                    .zip(multipliers)
                    .fold(Rational::zero(), |acc, (c, y)| acc + &c.rhs * y);
                sign_ok && cols_ok && by.is_positive()
            }
            (LpStatus::Unbounded, LpCertificate::Ray { point, direction }) => {
                if !self.is_feasible_point(point) || direction.len() != self.domains.len() {
                    return false;
                }
                let dom_ok = self
                    .domains
                    .iter()
                    .zip(direction)
                    .all(|(d, v)| *d == VarDomain::Free || !v.is_negative());
                let rec_ok = self.constraints.iter().all(|c| {
                    let v = Self::row_value(c, direction);
                    match c.sense {
                        Sense::GreaterEq => !v.is_negative(),
                        Sense::Equal => v.is_zero(),
                    }
                });
                let slope = self.objective_value(direction);
                let improving = match self.direction {
                    Direction::Minimize => slope.is_negative(),
                    Direction::Maximize => slope.is_positive(),
                };
                dom_ok && rec_ok && improving
            }
            _ => false,
        }
    }
}

fn merge(mut v: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    v.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(v.len());
    for (j, x) in v {
        match out.last_mut() {
            Some((lj, lx)) if *lj == j => *lx += x,
            _ => out.push((j, x)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

/// Optimizes a linear objective over the cone cut out by `constraints`, with the
/// system's coordinates as free variables.
pub fn lp_solve(
    objective: &[(SubsetIndex, Rational)],
    constraints: &InequalitySystem,
    direction: Direction,
) -> Result<LpResult> {
    let (lp, _) = cone_program(objective, constraints, direction)?;
    lp.solve()
}

/// The linear program behind [`lp_solve`]; row `i` is the system's row `i`.
pub(crate) fn cone_program(
    objective: &[(SubsetIndex, Rational)],
    constraints: &InequalitySystem,
    direction: Direction,
) -> Result<(LinearProgram, Vec<SubsetIndex>)> {
    let coords = constraints.coordinates().to_vec();
    let pos = |s: SubsetIndex| {
        constraints
            .coordinate_position(s)
            .ok_or(Error::UnknownCoordinate { subset: s })
    };
    let mut lp = LinearProgram::new(vec![VarDomain::Free; coords.len()]);
    for row in constraints.rows() {
        let coeffs = row
            .terms()
            .iter()
            .map(|&(s, c)| Ok((pos(s)?, Rational::from_integer(c.into()))))
            .collect::<Result<Vec<_>>>()?;
        lp.push(coeffs, row.sense(), Rational::zero());
    }
    let obj = objective
        .iter()
        .map(|(s, c)| Ok((pos(*s)?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    lp.set_objective(obj, direction);
    Ok((lp, coords))
}
