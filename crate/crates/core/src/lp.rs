//! Small dense linear programs.
//!
//! Two-phase tableau simplex with Bland's anti-cycling rule. Problems in this
//! crate have at most a few dozen variables and a few hundred rows, so a dense
//! tableau is the simplest thing that is exact enough.

use thiserror::Error;

const PIVOT_EPS: f64 = 1e-11;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),
    #[error("row has {got} coefficients, program has {expected} variables")]
    RowLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// `maximize cᵀx` subject to linear rows; variables are nonnegative unless
/// marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    feasibility_tol: f64,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            free: vec![false; num_vars],
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            feasibility_tol: 1e-10,
        }
    }

    /// All variables unrestricted in sign.
    pub fn all_free(mut self) -> Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn with_feasibility_tol(mut self, tol: f64) -> Self {
        self.feasibility_tol = tol;
        self
    }

    pub fn maximize(&mut self, c: &[f64]) -> Result<(), LpError> {
        self.check_len(c.len())?;
        self.objective = c.to_vec();
        Ok(())
    }

    pub fn add_row(&mut self, coeffs: &[f64], rel: Relation, rhs: f64) -> Result<(), LpError> {
        self.check_len(coeffs.len())?;
        self.rows.push((coeffs.to_vec(), rel, rhs));
        Ok(())
    }

    fn check_len(&self, got: usize) -> Result<(), LpError> {
        if got != self.num_vars {
            return Err(LpError::RowLength { expected: self.num_vars, got });
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        // Column layout: structural (free vars split in two), slacks/surpluses,
        // artificials, rhs.
        let mut col_of = Vec::with_capacity(self.num_vars);
        let mut n_struct = 0;
        for &free in &self.free {
            col_of.push(n_struct);
            n_struct += if free { 2 } else { 1 };
        }

        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(self.rows.len());
        for (coeffs, rel, rhs) in &self.rows {
            let mut a = vec![0.0; n_struct];
            for (j, &c) in coeffs.iter().enumerate() {
                a[col_of[j]] = c;
                if self.free[j] {
                    a[col_of[j] + 1] = -c;
                }
            }
            let (mut rel, mut rhs) = (*rel, *rhs);
            if rhs < 0.0 {
                a.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((a, rel, rhs));
        }

        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let n_cols = n_struct + n_slack + n_art;
        let rhs_col = n_cols;

        let mut tab = vec![vec![0.0; n_cols + 1]; rows.len()];
        let mut basis = vec![0usize; rows.len()];
        let (mut next_slack, mut next_art) = (n_struct, n_struct + n_slack);
        for (i, (a, rel, rhs)) in rows.iter().enumerate() {
            tab[i][..n_struct].copy_from_slice(a);
            tab[i][rhs_col] = *rhs;
            match rel {
                Relation::Le => {
                    tab[i][next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    tab[i][next_slack] = -1.0;
                    next_slack += 1;
                    tab[i][next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    tab[i][next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        let is_art = |j: usize| j >= n_struct + n_slack && j < n_cols;

        if n_art > 0 {
            let cost: Vec<f64> = (0..n_cols).map(|j| if is_art(j) { -1.0 } else { 0.0 }).collect();
            let allowed = vec![true; n_cols];
            match run(&mut tab, &mut basis, &cost, &allowed)? {
                Phase::Optimal(value) if value < -self.feasibility_tol => return Ok(LpOutcome::Infeasible),
                Phase::Optimal(_) => {}
                // Phase one is bounded above by zero.
                Phase::Unbounded => unreachable!("phase-one objective is bounded"),
            }
            // Pivot remaining zero-level artificials out; drop redundant rows.
            let mut i = 0;
            while i < tab.len() {
                if is_art(basis[i]) {
                    let pivot_col = (0..n_struct + n_slack).find(|&j| tab[i][j].abs() > PIVOT_EPS);
                    match pivot_col {
                        Some(j) => pivot(&mut tab, &mut basis, i, j),
                        None => {
                            tab.remove(i);
                            basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let mut cost = vec![0.0; n_cols];
        for (j, &c) in self.objective.iter().enumerate() {
            cost[col_of[j]] = c;
            if self.free[j] {
                cost[col_of[j] + 1] = -c;
            }
        }
        let allowed: Vec<bool> = (0..n_cols).map(|j| !is_art(j)).collect();
        let value = match run(&mut tab, &mut basis, &cost, &allowed)? {
            Phase::Optimal(v) => v,
            Phase::Unbounded => return Ok(LpOutcome::Unbounded),
        };

        let mut structural = vec![0.0; n_struct];
        for (i, &b) in basis.iter().enumerate() {
            if b < n_struct {
                structural[b] = tab[i][rhs_col];
            }
        }
        let x = (0..self.num_vars)
            .map(|j| {
                let v = structural[col_of[j]];
                if self.free[j] {
                    v - structural[col_of[j] + 1]
                } else {
                    v
                }
            })
            .collect();
        Ok(LpOutcome::Optimal { x, value })
    }
}

enum Phase {
    Optimal(f64),
    Unbounded,
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let p = tab[row][col];
    tab[row].iter_mut().for_each(|v| *v /= p);
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = r[col];
        if factor != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    }
    basis[row] = col;
}

/// Primal simplex on a tableau already in canonical form for `basis`.
fn run(tab: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], allowed: &[bool]) -> Result<Phase, LpError> {
    let n_cols = cost.len();
    let rhs_col = n_cols;
    for _ in 0..MAX_ITERATIONS {
        // Reduced costs z_j − c_j for maximization.
        let mut entering = None;
        for j in 0..n_cols {
            if !allowed[j] || basis.contains(&j) {
                continue;
            }
            let z: f64 = tab.iter().zip(basis.iter()).map(|(r, &b)| cost[b] * r[j]).sum();
            if z - cost[j] < -PIVOT_EPS {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else {
            let value = tab.iter().zip(basis.iter()).map(|(r, &b)| cost[b] * r[rhs_col]).sum();
            return Ok(Phase::Optimal(value));
        };

        let mut leaving: Option<(usize, f64)> = None;
        for (i, r) in tab.iter().enumerate() {
            if r[col] > PIVOT_EPS {
                let ratio = r[rhs_col] / r[col];
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        match leaving {
            None => return Ok(Phase::Unbounded),
            Some((row, _)) => pivot(tab, basis, row, col),
        }
    }
    Err(LpError::IterationLimit(MAX_ITERATIONS))
}
