//! Dense two-phase simplex for small linear programs.
//!
//! Problems are stated over free variables:
//!
//! ```text
//! minimize    c · x
//! subject to  A_ub x <= b_ub
//!             A_eq x  = b_eq
//! ```
//!
//! Internally every free variable is split into a difference of two
//! non-negative parts, every inequality row gets a slack column and the
//! standard-form problem is solved with Bland's rule, which cannot cycle.
//! The problems this crate builds have at most a few hundred columns, so a
//! dense tableau is the simplest thing that is exact enough.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("program has no variables")]
    NoVariables,
    #[error("row {row} of {kind} has {found} coefficients, expected {expected}")]
    RowLength {
        kind: &'static str,
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("{kind} has {rows} rows but {rhs} right-hand sides")]
    RhsLength {
        kind: &'static str,
        rows: usize,
        rhs: usize,
    },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),
    #[error("barrier method failed: {0}")]
    Barrier(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `minimize c·x` subject to `A_ub x <= b_ub` and `A_eq x = b_eq`, with `x` free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    #[serde(default)]
    pub a_eq: Vec<Vec<f64>>,
    #[serde(default)]
    pub b_eq: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    /// Meaningful only when `status == Optimal`; empty otherwise.
    pub solution: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    pub tol_feas: f64,
    pub tol_obj: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-9,
            tol_obj: 1e-9,
            max_pivots: 200_000,
        }
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            a_eq: Vec::new(),
            b_eq: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row · x <= rhs`.
    pub fn le(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    /// Adds `row · x >= rhs`.
    pub fn ge(self, row: Vec<f64>, rhs: f64) -> Self {
        let neg = row.into_iter().map(|v| -v).collect();
        self.le(neg, -rhs)
    }

    /// Adds `row · x = rhs`.
    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::NoVariables);
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for (kind, a, b) in [
            ("inequality rows", &self.a_ub, &self.b_ub),
            ("equality rows", &self.a_eq, &self.b_eq),
        ] {
            if a.len() != b.len() {
                return Err(LpError::RhsLength {
                    kind,
                    rows: a.len(),
                    rhs: b.len(),
                });
            }
            for (row, coeffs) in a.iter().enumerate() {
                if coeffs.len() != n {
                    return Err(LpError::RowLength {
                        kind,
                        row,
                        found: coeffs.len(),
                        expected: n,
                    });
                }
                if coeffs.iter().any(|v| !v.is_finite()) {
                    return Err(LpError::NonFinite(kind));
                }
            }
            if b.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite(kind));
            }
        }
        Ok(())
    }

    /// Largest constraint violation of `x` (zero when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let ub = self
            .a_ub
            .iter()
            .zip(&self.b_ub)
            .map(|(row, b)| crate::linalg::dot(row, x) - b)
            .fold(0.0_f64, f64::max);
        let eq = self
            .a_eq
            .iter()
            .zip(&self.b_eq)
            .map(|(row, b)| (crate::linalg::dot(row, x) - b).abs())
            .fold(0.0_f64, f64::max);
        ub.max(eq)
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult, LpError> {
    solve_lp_with(lp, &LpOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &LpOptions) -> Result<LpResult, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m_ub = lp.a_ub.len();
    let m_eq = lp.a_eq.len();
    let m = m_ub + m_eq;

    // Columns: u (n), w (n), slacks (m_ub), artificials (m), then rhs.
    let n_struct = 2 * n + m_ub;
    let n_cols = n_struct + m;
    let width = n_cols + 1;

    let scale = lp
        .a_ub
        .iter()
        .chain(&lp.a_eq)
        .flatten()
        .chain(&lp.b_ub)
        .chain(&lp.b_eq)
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let piv_eps = 1e-11 * scale.max(1.0);

    let mut tab = Tableau {
        rows: vec![vec![0.0; width]; m],
        obj: vec![0.0; width],
        basis: vec![0; m],
        width,
    };

    for (i, (row, &b)) in lp
        .a_ub
        .iter()
        .zip(&lp.b_ub)
        .map(|(r, b)| (r, b))
        .chain(lp.a_eq.iter().zip(&lp.b_eq))
        .enumerate()
    {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let t = &mut tab.rows[i];
        for j in 0..n {
            t[j] = sign * row[j];
            t[n + j] = -sign * row[j];
        }
        if i < m_ub {
            t[2 * n + i] = sign;
        }
        t[n_struct + i] = 1.0;
        t[n_cols] = sign * b;
        tab.basis[i] = n_struct + i;
    }

    let mut pivots = 0usize;

    // Phase I: minimize the sum of artificials.
    if m > 0 {
        for j in 0..width {
            tab.obj[j] = 0.0;
        }
        for i in 0..m {
            for j in 0..width {
                if j < n_struct || j == n_cols {
                    tab.obj[j] -= tab.rows[i][j];
                }
            }
        }
        let outcome = tab.run(n_struct, piv_eps, opts.max_pivots, &mut pivots)?;
        debug_assert!(outcome != RunOutcome::Unbounded);
        let infeas = -tab.obj[n_cols];
        if infeas > opts.tol_feas * scale.max(1.0) {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                solution: Vec::new(),
                value: f64::NAN,
            });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= n_struct {
                let pivot_col = (0..n_struct).find(|&j| tab.rows[i][j].abs() > piv_eps);
                match pivot_col {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase II: original objective over structural columns only.
    for j in 0..width {
        tab.obj[j] = 0.0;
    }
    for j in 0..n {
        tab.obj[j] = lp.objective[j];
        tab.obj[n + j] = -lp.objective[j];
    }
    for i in 0..tab.rows.len() {
        let cb = tab.obj[tab.basis[i]];
        if cb != 0.0 {
            for j in 0..width {
                tab.obj[j] -= cb * tab.rows[i][j];
            }
        }
    }
    let outcome = tab.run(n_struct, piv_eps, opts.max_pivots, &mut pivots)?;
    if outcome == RunOutcome::Unbounded {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            solution: Vec::new(),
            value: f64::NEG_INFINITY,
        });
    }

    let mut y = vec![0.0; n_cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rows[i][n_cols];
    }
    let x: Vec<f64> = (0..n).map(|j| y[j] - y[n + j]).collect();
    let value = crate::linalg::dot(&lp.objective, &x);
    Ok(LpResult {
        status: LpStatus::Optimal,
        solution: x,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RunOutcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    /// Reduced costs; the last entry holds minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.rows[r][c];
        for j in 0..w {
            self.rows[r][j] /= p;
        }
        self.rows[r][c] = 1.0;
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..w {
                    row[j] -= f * prow[j];
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for j in 0..w {
                self.obj[j] -= f * prow[j];
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule over columns `0..n_enter`.
    fn run(
        &mut self,
        n_enter: usize,
        eps: f64,
        max_pivots: usize,
        pivots: &mut usize,
    ) -> Result<RunOutcome, LpError> {
        let rhs = self.width - 1;
        let rc_eps = 1e-11
            * self.obj[..n_enter]
                .iter()
                .fold(1.0_f64, |acc, v| acc.max(v.abs()));
        loop {
            let Some(enter) = (0..n_enter).find(|&j| self.obj[j] < -rc_eps) else {
                return Ok(RunOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a > eps {
                    let ratio = row[rhs].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                            if (tie && self.basis[i] < self.basis[k]) || (!tie && ratio < best) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(RunOutcome::Unbounded);
            };
            self.pivot(r, enter);
            *pivots += 1;
            if *pivots > max_pivots {
                return Err(LpError::IterationLimit(max_pivots));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_bound() {
        let lp = LinearProgram::new(vec![-1.0])
            .le(vec![1.0], 3.0)
            .ge(vec![1.0], 0.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.solution[0] - 3.0).abs() < 1e-12);
        assert!((r.value + 3.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let lp = LinearProgram::new(vec![1.0])
            .ge(vec![1.0], 1.0)
            .le(vec![1.0], 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_is_detected() {
        let lp = LinearProgram::new(vec![-1.0, 0.0]).le(vec![0.0, 1.0], 1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equalities_and_free_variables() {
        // minimize x + y, x - y = 1, x >= -2, y >= -3
        let lp = LinearProgram::new(vec![1.0, 1.0])
            .eq(vec![1.0, -1.0], 1.0)
            .ge(vec![1.0, 0.0], -2.0)
            .ge(vec![0.0, 1.0], -3.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 5.0).abs() < 1e-12, "{:?}", r);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::new(vec![1.0, 2.0])
            .eq(vec![1.0, 1.0], 1.0)
            .eq(vec![2.0, 2.0], 2.0)
            .ge(vec![1.0, 0.0], 0.0)
            .ge(vec![0.0, 1.0], 0.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let lp = LinearProgram::new(vec![1.0, 1.0]).le(vec![1.0], 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::RowLength { .. })));
        let empty = LinearProgram::new(vec![]);
        assert_eq!(solve_lp(&empty), Err(LpError::NoVariables));
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Classic cycling example for largest-coefficient rules.
        let lp = LinearProgram::new(vec![-0.75, 150.0, -0.02, 6.0])
            .le(vec![0.25, -60.0, -0.04, 9.0], 0.0)
            .le(vec![0.5, -90.0, -0.02, 3.0], 0.0)
            .le(vec![0.0, 0.0, 1.0, 0.0], 1.0)
            .ge(vec![1.0, 0.0, 0.0, 0.0], 0.0)
            .ge(vec![0.0, 1.0, 0.0, 0.0], 0.0)
            .ge(vec![0.0, 0.0, 1.0, 0.0], 0.0)
            .ge(vec![0.0, 0.0, 0.0, 1.0], 0.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 0.05).abs() < 1e-9, "{}", r.value);
    }
}
