//! Affine-expression front end for building LPs and cone programs.
//!
//! Norm encodings in [`crate::norms`] add constraints of the form
//! `N(x) <= t` where `x` and `t` are affine in the program variables; this
//! module turns the accumulated rows into a dense [`ConeProgram`] and picks
//! the solver (simplex when no cone rows are present).

use thiserror::Error;

use crate::cone::{solve_cone_with, ConeOptions, ConeProgram, SocConstraint};
use crate::lp::{LinearProgram, LpError, LpStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("program is infeasible")]
    Infeasible,
    #[error("program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Affine {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn var(i: usize) -> Self {
        Self {
            terms: vec![(i, 1.0)],
            constant: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(i, c)| (i, c * s)).collect(),
            constant: self.constant * s,
        }
    }

    pub fn plus(&self, other: &Affine) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self {
            terms,
            constant: self.constant + other.constant,
        }
    }

    pub fn minus(&self, other: &Affine) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    pub fn add_term(mut self, i: usize, c: f64) -> Self {
        self.terms.push((i, c));
        self
    }

    pub fn add_constant(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }

    /// `Σ coeffs[k] * exprs[k]`
    pub fn combination(coeffs: &[f64], exprs: &[Affine]) -> Self {
        let mut out = Affine::zero();
        for (c, e) in coeffs.iter().zip(exprs) {
            if *c != 0.0 {
                out = out.plus(&e.scaled(*c));
            }
        }
        out
    }

    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        for &(i, c) in &self.terms {
            row[i] += c;
        }
        row
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, c)| c * values[i]).sum::<f64>()
    }
}

/// Vector of constants as affine expressions.
pub fn constants(v: &[f64]) -> Vec<Affine> {
    v.iter().map(|&c| Affine::constant(c)).collect()
}

#[derive(Debug, Clone, Default)]
pub struct ProgramBuilder {
    n_vars: usize,
    le: Vec<Affine>,
    eq: Vec<Affine>,
    socs: Vec<(Vec<Affine>, Affine)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// True when the program was linear and solved by the simplex.
    pub exact: bool,
}

impl Solution {
    pub fn eval(&self, e: &Affine) -> f64 {
        e.eval(&self.values)
    }

    pub fn eval_all(&self, es: &[Affine]) -> Vec<f64> {
        es.iter().map(|e| self.eval(e)).collect()
    }
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self) -> Affine {
        self.n_vars += 1;
        Affine::var(self.n_vars - 1)
    }

    pub fn vars(&mut self, n: usize) -> Vec<Affine> {
        (0..n).map(|_| self.var()).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_linear(&self) -> bool {
        self.socs.is_empty()
    }

    /// `lhs <= rhs`
    pub fn le(&mut self, lhs: &Affine, rhs: &Affine) {
        self.le.push(lhs.minus(rhs));
    }

    /// `lhs = rhs`
    pub fn eq(&mut self, lhs: &Affine, rhs: &Affine) {
        self.eq.push(lhs.minus(rhs));
    }

    /// `|e| <= bound`
    pub fn abs_le(&mut self, e: &Affine, bound: &Affine) {
        self.le(e, bound);
        self.le(&e.scaled(-1.0), bound);
    }

    /// `‖items‖₂ <= bound`
    pub fn soc(&mut self, items: Vec<Affine>, bound: Affine) {
        self.socs.push((items, bound));
    }

    fn to_program(&self, objective: &Affine) -> ConeProgram {
        let n = self.n_vars.max(1);
        let mut lp = LinearProgram::new(objective.dense(n));
        for e in &self.le {
            lp = lp.le(e.dense(n), -e.constant);
        }
        for e in &self.eq {
            lp = lp.eq(e.dense(n), -e.constant);
        }
        let socs = self
            .socs
            .iter()
            .map(|(items, bound)| SocConstraint {
                lhs: items.iter().map(|e| (e.dense(n), e.constant)).collect(),
                rhs: (bound.dense(n), bound.constant),
            })
            .collect();
        ConeProgram { lp, socs }
    }

    pub fn minimize(&self, objective: &Affine) -> Result<Solution, SolveError> {
        self.minimize_with(objective, &ConeOptions::default())
    }

    pub fn minimize_with(
        &self,
        objective: &Affine,
        opts: &ConeOptions,
    ) -> Result<Solution, SolveError> {
        let prog = self.to_program(objective);
        let res = solve_cone_with(&prog, opts)?;
        match res.status {
            LpStatus::Optimal => {
                let mut values = res.solution;
                values.truncate(self.n_vars);
                let objective_value = objective.eval(&values);
                Ok(Solution {
                    values,
                    objective: objective_value,
                    exact: self.is_linear(),
                })
            }
            LpStatus::Infeasible => Err(SolveError::Infeasible),
            LpStatus::Unbounded => Err(SolveError::Unbounded),
        }
    }

    pub fn maximize(&self, objective: &Affine) -> Result<Solution, SolveError> {
        let mut sol = self.minimize(&objective.scaled(-1.0))?;
        sol.objective = -sol.objective;
        Ok(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_solves_small_lp() {
        let mut b = ProgramBuilder::new();
        let x = b.var();
        let y = b.var();
        b.le(&x.plus(&y), &Affine::constant(4.0));
        b.le(&x, &Affine::constant(3.0));
        b.le(&Affine::zero(), &x);
        b.le(&Affine::zero(), &y);
        let sol = b.maximize(&x.scaled(2.0).plus(&y)).unwrap();
        assert!(sol.exact);
        assert!((sol.objective - 7.0).abs() < 1e-12);
    }

    #[test]
    fn builder_with_cone() {
        let mut b = ProgramBuilder::new();
        let x = b.vars(2);
        b.soc(x.clone(), Affine::constant(1.0));
        let sol = b.maximize(&x[0]).unwrap();
        assert!(!sol.exact);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }
}
