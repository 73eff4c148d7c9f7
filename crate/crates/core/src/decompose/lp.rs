//! Two-phase revised simplex for `min c.x  s.t.  A x = b, x >= 0`.
//!
//! Generic over [`Scalar`]: over rationals every comparison is exact and the
//! entering column is chosen by Bland's rule; over `f64` the entering column
//! is chosen by Dantzig's rule, falling back to Bland after a run of
//! degenerate pivots, and the basis inverse is refactored periodically.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const FLOAT_PIVOT_TOL: f64 = 1e-9;
const FLOAT_COST_TOL: f64 = 1e-10;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_STREAK: usize = 32;
pub const DEFAULT_ITERATION_CAP: usize = 200_000;

/// Equality-form linear program with columns stored densely.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    rows: usize,
    columns: Vec<Vec<S>>,
    b: Vec<S>,
    c: Vec<S>,
}

#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    pub x: Vec<S>,
    pub objective: S,
    /// Optimal duals `y` with `A^T y <= c` and `b.y = objective`.
    pub dual: Vec<S>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub enum LpOutcome<S> {
    Optimal(LpSolution<S>),
    /// `y` with `A^T y <= 0` and `b.y > 0`.
    Infeasible { farkas: Vec<S> },
    Unbounded,
}

/// Residuals of a primal/dual pair; all zero on the exact path.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub primal_residual: f64,
    pub primal_negativity: f64,
    pub dual_violation: f64,
    pub gap: f64,
}

impl Certificate {
    pub fn worst(&self) -> f64 {
        self.primal_residual
            .max(self.primal_negativity)
            .max(self.dual_violation)
            .max(self.gap)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn residual<S: Scalar>(x: &S) -> f64 {
    x.to_f64().abs()
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(rows: usize, columns: Vec<Vec<S>>, b: Vec<S>, c: Vec<S>) -> Result<Self> {
        if b.len() != rows {
            return Err(Error::DimensionMismatch { expected: rows, got: b.len() });
        }
        if c.len() != columns.len() {
            return Err(Error::DimensionMismatch { expected: columns.len(), got: c.len() });
        }
        if let Some(col) = columns.iter().find(|col| col.len() != rows) {
            return Err(Error::DimensionMismatch { expected: rows, got: col.len() });
        }
        Ok(LinearProgram { rows, columns, b, c })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[Vec<S>] {
        &self.columns
    }

    pub fn solve(&self) -> Result<LpOutcome<S>> {
        self.solve_with_cap(DEFAULT_ITERATION_CAP)
    }

    pub fn solve_with_cap(&self, cap: usize) -> Result<LpOutcome<S>> {
        Simplex::new(self, cap).run()
    }

    /// Primal residual, negativity, dual violation and duality gap.
    pub fn certify(&self, sol: &LpSolution<S>) -> Certificate {
        let mut primal_residual: f64 = 0.0;
        for r in 0..self.rows {
            let mut acc = -self.b[r].clone();
            for (col, x) in self.columns.iter().zip(&sol.x) {
                if !x.is_zero() {
                    acc = acc + col[r].clone() * x.clone();
                }
            }
            primal_residual = primal_residual.max(residual(&acc));
        }
        let primal_negativity = sol
            .x
            .iter()
            .map(|x| (-x.to_f64()).max(0.0))
            .fold(0.0, f64::max);
        let dual_violation = self
            .columns
            .iter()
            .zip(&self.c)
            .map(|(col, c)| (dot(col, &sol.dual) - c.clone()).to_f64().max(0.0))
            .fold(0.0, f64::max);
        let gap = residual(&(dot(&self.b, &sol.dual) - dot(&self.c, &sol.x)));
        Certificate {
            primal_residual,
            primal_negativity,
            dual_violation,
            gap,
        }
    }

    /// Largest violation of the Farkas conditions; positive `b.y` is returned
    /// separately.
    pub fn check_farkas(&self, y: &[S]) -> (f64, S) {
        let violation = self
            .columns
            .iter()
            .map(|col| dot(col, y).to_f64().max(0.0))
            .fold(0.0, f64::max);
        (violation, dot(&self.b, y))
    }
}

struct Simplex<'a, S> {
    m: usize,
    cols: &'a [Vec<S>],
    cost: &'a [S],
    flip: Vec<bool>,
    b: Vec<S>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<S>>,
    xb: Vec<S>,
    iterations: usize,
    cap: usize,
    pivot_tol: S,
    cost_tol: S,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl<'a, S: Scalar> Simplex<'a, S> {
    fn new(lp: &'a LinearProgram<S>, cap: usize) -> Self {
        let m = lp.rows;
        let flip: Vec<bool> = lp.b.iter().map(|v| *v < S::zero()).collect();
        let b: Vec<S> = lp
            .b
            .iter()
            .zip(&flip)
            .map(|(v, f)| if *f { -v.clone() } else { v.clone() })
            .collect();
        let total = lp.columns.len() + m;
        let mut in_basis = vec![false; total];
        let basis: Vec<usize> = (lp.columns.len()..total).collect();
        for &j in &basis {
            in_basis[j] = true;
        }
        let binv = (0..m)
            .map(|i| (0..m).map(|k| if i == k { S::one() } else { S::zero() }).collect())
            .collect();
        let tol = |t: f64| S::from_f64_checked(t).unwrap_or_else(S::zero);
        Simplex {
            m,
            cols: &lp.columns,
            cost: &lp.c,
            flip,
            xb: b.clone(),
            b,
            basis,
            in_basis,
            binv,
            iterations: 0,
            cap,
            pivot_tol: tol(FLOAT_PIVOT_TOL),
            cost_tol: tol(FLOAT_COST_TOL),
        }
    }

    fn n(&self) -> usize {
        self.cols.len()
    }

    fn entry(&self, j: usize, r: usize) -> S {
        if j < self.n() {
            let v = self.cols[j][r].clone();
            if self.flip[r] {
                -v
            } else {
                v
            }
        } else if j - self.n() == r {
            S::one()
        } else {
            S::zero()
        }
    }

    fn column(&self, j: usize) -> Vec<S> {
        (0..self.m).map(|r| self.entry(j, r)).collect()
    }

    fn ftran(&self, j: usize) -> Vec<S> {
        if j >= self.n() {
            let k = j - self.n();
            return (0..self.m).map(|i| self.binv[i][k].clone()).collect();
        }
        let col = self.column(j);
        self.binv.iter().map(|row| dot(row, &col)).collect()
    }

    fn duals(&self, cost: &dyn Fn(usize) -> S) -> Vec<S> {
        let cb: Vec<S> = self.basis.iter().map(|&j| cost(j)).collect();
        (0..self.m)
            .map(|k| {
                cb.iter()
                    .zip(&self.binv)
                    .fold(S::zero(), |acc, (c, row)| acc + c.clone() * row[k].clone())
            })
            .collect()
    }

    fn reduced_cost(&self, j: usize, y: &[S], cost: &dyn Fn(usize) -> S) -> S {
        let mut d = cost(j);
        for (r, yr) in y.iter().enumerate() {
            if !yr.is_zero() {
                d = d - yr.clone() * self.entry(j, r);
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[S]) {
        let p = u[r].clone();
        for k in 0..self.m {
            self.binv[r][k] = self.binv[r][k].clone() / p.clone();
        }
        self.xb[r] = self.xb[r].clone() / p;
        let row_r = self.binv[r].clone();
        let x_r = self.xb[r].clone();
        for i in 0..self.m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for k in 0..self.m {
                if !row_r[k].is_zero() {
                    self.binv[i][k] = self.binv[i][k].clone() - f.clone() * row_r[k].clone();
                }
            }
            self.xb[i] = self.xb[i].clone() - f * x_r.clone();
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
        self.iterations += 1;
        if !S::is_exact() && self.iterations % REFACTOR_EVERY == 0 {
            self.refactor();
        }
    }

    /// Gauss-Jordan inverse of the current basis matrix.
    fn refactor(&mut self) {
        let m = self.m;
        let mut a: Vec<Vec<S>> = (0..m)
            .map(|r| self.basis.iter().map(|&j| self.entry(j, r)).collect())
            .collect();
        let mut inv: Vec<Vec<S>> = (0..m)
            .map(|i| (0..m).map(|k| if i == k { S::one() } else { S::zero() }).collect())
            .collect();
        for col in 0..m {
            let Some(p) = (col..m).max_by(|&x, &y| {
                a[x][col]
                    .abs_val()
                    .partial_cmp(&a[y][col].abs_val())
                    .unwrap_or(std::cmp::Ordering::Equal)
            }) else {
                return;
            };
            if a[p][col].abs_val() <= self.pivot_tol {
                return;
            }
            a.swap(p, col);
            inv.swap(p, col);
            let d = a[col][col].clone();
            for k in 0..m {
                a[col][k] = a[col][k].clone() / d.clone();
                inv[col][k] = inv[col][k].clone() / d.clone();
            }
            for i in 0..m {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for k in 0..m {
                        a[i][k] = a[i][k].clone() - f.clone() * a[col][k].clone();
                        inv[i][k] = inv[i][k].clone() - f.clone() * inv[col][k].clone();
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = self.binv.iter().map(|row| dot(row, &self.b)).collect();
        for v in &mut self.xb {
            if *v < S::zero() && v.abs_val() <= self.pivot_tol {
                *v = S::zero();
            }
        }
    }

    fn step(&mut self, cost: &dyn Fn(usize) -> S, bland: bool) -> Result<(Step, bool)> {
        if self.iterations >= self.cap {
            return Err(Error::BudgetExhausted(self.cap));
        }
        let y = self.duals(cost);
        let neg_tol = -self.cost_tol.clone();
        let mut entering: Option<(usize, S)> = None;
        for j in 0..self.n() {
            if self.in_basis[j] {
                continue;
            }
            let d = self.reduced_cost(j, &y, cost);
            if d < neg_tol && entering.as_ref().is_none_or(|(_, best)| d < *best) {
                entering = Some((j, d));
                if bland {
                    break;
                }
            }
        }
        let Some((j, _)) = entering else {
            return Ok((Step::Optimal, false));
        };
        let u = self.ftran(j);
        let mut leave: Option<(usize, S)> = None;
        for i in 0..self.m {
            if u[i] <= self.pivot_tol {
                continue;
            }
            let t = self.xb[i].clone() / u[i].clone();
            let better = match &leave {
                None => true,
                Some((bi, bt)) => {
                    let diff = t.clone() - bt.clone();
                    if diff < -self.pivot_tol.clone() {
                        true
                    } else if diff.abs_val() <= self.pivot_tol {
                        if bland || S::is_exact() {
                            self.basis[i] < self.basis[*bi]
                        } else {
                            u[i].abs_val() > u[*bi].abs_val()
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                leave = Some((i, t));
            }
        }
        let Some((r, t)) = leave else {
            return Ok((Step::Unbounded, false));
        };
        let degenerate = t.abs_val() <= self.pivot_tol;
        self.pivot(r, j, &u);
        Ok((Step::Pivoted, degenerate))
    }

    fn optimize(&mut self, cost: &dyn Fn(usize) -> S) -> Result<bool> {
        let mut streak = 0;
        loop {
            let bland = S::is_exact() || streak >= DEGENERATE_STREAK;
            match self.step(cost, bland)? {
                (Step::Optimal, _) => return Ok(true),
                (Step::Unbounded, _) => return Ok(false),
                (Step::Pivoted, true) => streak += 1,
                (Step::Pivoted, false) => streak = 0,
            }
        }
    }

    fn unflip(&self, y: Vec<S>) -> Vec<S> {
        y.into_iter()
            .zip(&self.flip)
            .map(|(v, f)| if *f { -v } else { v })
            .collect()
    }

    fn run(mut self) -> Result<LpOutcome<S>> {
        let n = self.n();
        // phase 1: artificial columns n..n+m cost 1 and never re-enter
        let phase1 = |j: usize| if j < n { S::zero() } else { S::one() };
        self.optimize(&phase1)?;
        let infeasibility = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(j, _)| **j >= n)
            .fold(S::zero(), |acc, (_, x)| acc + x.clone());
        let scale = self.b.iter().fold(S::one(), |acc, v| acc + v.abs_val());
        if infeasibility > self.pivot_tol.clone() * scale {
            let y = self.duals(&phase1);
            return Ok(LpOutcome::Infeasible { farkas: self.unflip(y) });
        }
        // drive remaining artificials out where a structural column allows it
        for r in 0..self.m {
            if self.basis[r] < n {
                continue;
            }
            let row = self.binv[r].clone();
            let candidate = (0..n)
                .filter(|&j| !self.in_basis[j])
                .map(|j| (j, dot(&row, &self.column(j))))
                .filter(|(_, v)| v.abs_val() > self.pivot_tol)
                .max_by(|a, b| {
                    a.1.abs_val()
                        .partial_cmp(&b.1.abs_val())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            if let Some((j, _)) = candidate {
                let u = self.ftran(j);
                self.pivot(r, j, &u);
            }
        }
        if !S::is_exact() {
            self.refactor();
        }
        let costs = self.cost;
        let phase2 = |j: usize| if j < n { costs[j].clone() } else { S::zero() };
        if !self.optimize(&phase2)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![S::zero(); n];
        for (&j, v) in self.basis.iter().zip(&self.xb) {
            if j < n {
                x[j] = if *v < S::zero() && v.abs_val() <= self.pivot_tol {
                    S::zero()
                } else {
                    v.clone()
                };
            }
        }
        let objective = dot(costs, &x);
        let y = self.duals(&phase2);
        Ok(LpOutcome::Optimal(LpSolution {
            x,
            objective,
            dual: self.unflip(y),
            iterations: self.iterations,
        }))
    }
}
