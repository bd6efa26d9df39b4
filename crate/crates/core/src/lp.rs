//! Dense two-phase simplex kernel for the small linear programs that certify
//! polytope membership and vertex redundancy.
//!
//! Problems are stated as `minimize c·x` subject to linear rows and `x ≥ 0`.
//! Sizes here are tiny (a few hundred columns at most), so the tableau is kept
//! dense and Bland's rule is used throughout to rule out cycling.

use crate::linalg;

/// Phase-one residual below which a program counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reduced-cost threshold for optimality.
pub const OPTIMALITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Optimal {
        x: Vec<f64>,
        value: f64,
    },
    /// `residual` is the optimal phase-one value (sum of artificials on
    /// row-normalised constraints).
    Infeasible {
        residual: f64,
    },
    Unbounded,
}

impl Solution {
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            Solution::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, Solution::Infeasible { .. })
    }
}

/// `minimize objective·x` over `x ≥ 0` subject to the added rows.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

impl LinearProgram {
    /// A pure feasibility problem in `n_vars` nonnegative variables.
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn minimize(mut self, c: Vec<f64>) -> Self {
        assert_eq!(c.len(), self.n_vars, "objective length");
        self.objective = c;
        self
    }

    pub fn maximize(self, c: Vec<f64>) -> Self {
        self.minimize(c.into_iter().map(|v| -v).collect())
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_vars, "row length");
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn solve(&self) -> Solution {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// Standard-form matrix `[A | slack | artificial]` after row scaling and
    /// sign normalisation; kept for the final basis re-solve.
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    t: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    n_vars: usize,
    n_struct: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_slack = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let n_struct = lp.n_vars + n_slack;
        let n_cols = n_struct + m;
        let mut a = vec![vec![0.0; n_cols]; m];
        let mut b = vec![0.0; m];
        let mut slack = lp.n_vars;
        for (i, row) in lp.rows.iter().enumerate() {
            a[i][..lp.n_vars].copy_from_slice(&row.coeffs);
            match row.relation {
                Relation::Le => {
                    a[i][slack] = 1.0;
                    slack += 1;
                }
                Relation::Ge => {
                    a[i][slack] = -1.0;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            b[i] = row.rhs;
            let scale = a[i][..n_struct]
                .iter()
                .fold(0.0_f64, |acc, v| acc.max(v.abs()));
            let scale = if scale > 0.0 { scale } else { 1.0 };
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for v in a[i][..n_struct].iter_mut() {
                *v *= sign / scale;
            }
            b[i] *= sign / scale;
            a[i][n_struct + i] = 1.0;
        }
        Self {
            t: a.clone(),
            rhs: b.clone(),
            a,
            b,
            basis: (n_struct..n_struct + m).collect(),
            n_vars: lp.n_vars,
            n_struct,
        }
    }

    fn n_cols(&self) -> usize {
        self.a.first().map_or(self.n_struct, Vec::len)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        self.rhs[row] /= p;
        let pivot_row = self.t[row].clone();
        let pivot_rhs = self.rhs[row];
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][col];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in self.t[i].iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.t[i][col] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Primal simplex on the current tableau with Bland's rule, restricted to
    /// columns `< allowed`. Returns `false` on unboundedness.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> bool {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, &bj)| cost[bj] * self.t[i][j])
                        .sum::<f64>();
                reduced < -OPTIMALITY_TOL
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let coef = self.t[i][col];
                if coef <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs[i].max(0.0) / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-14
                            || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])
                        {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            match leave {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
        true
    }

    fn run(mut self, objective: &[f64]) -> Solution {
        let n_cols = self.n_cols();
        let mut phase1 = vec![0.0; n_cols];
        for c in phase1[self.n_struct..].iter_mut() {
            *c = 1.0;
        }
        self.optimize(&phase1, n_cols);
        let residual: f64 = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&j, _)| j >= self.n_struct)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        if residual > FEASIBILITY_TOL {
            return Solution::Infeasible { residual };
        }

        // Drive remaining (zero-level) artificials out of the basis; rows
        // where that is impossible are redundant and dropped.
        let mut row = 0;
        while row < self.t.len() {
            if self.basis[row] >= self.n_struct {
                let col = (0..self.n_struct).find(|&j| self.t[row][j].abs() > 1e-9);
                match col {
                    Some(c) => self.pivot(row, c),
                    None => {
                        self.t.remove(row);
                        self.rhs.remove(row);
                        self.basis.remove(row);
                        self.a.remove(row);
                        self.b.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }

        let mut cost = vec![0.0; n_cols];
        cost[..self.n_vars].copy_from_slice(objective);
        if !self.optimize(&cost, self.n_struct) {
            return Solution::Unbounded;
        }

        let mut full = vec![0.0; n_cols];
        for (i, &j) in self.basis.iter().enumerate() {
            full[j] = self.rhs[i];
        }
        // Re-solve B x_B = b from the untouched rows to shed pivoting error.
        let basis_matrix: Vec<Vec<f64>> = self
            .a
            .iter()
            .map(|r| self.basis.iter().map(|&j| r[j]).collect())
            .collect();
        if let Some(xb) = linalg::solve_square(basis_matrix, self.b.clone()) {
            if xb.iter().all(|v| *v >= -1e-9) {
                for (&j, v) in self.basis.iter().zip(xb) {
                    full[j] = v;
                }
            }
        }
        let x: Vec<f64> = full[..self.n_vars].iter().map(|v| v.max(0.0)).collect();
        let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        Solution::Optimal { x, value }
    }
}
