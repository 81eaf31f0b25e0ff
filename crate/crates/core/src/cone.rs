//! Log-barrier path following for linear programs with a handful of
//! second-order-cone constraints `‖B x + β‖₂ <= γ·x + δ`.
//!
//! Purely linear programs are forwarded to the simplex in [`crate::lp`].
//! Otherwise the linear part is presolved with one auxiliary LP that finds
//! a relative-interior point and detects rows that can never be strict
//! (implicit equalities). Those rows and the explicit equalities are
//! eliminated through a null-space parametrisation, after which a plain
//! Newton barrier method runs on the reduced, full-dimensional problem.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{self, dot, euclid};
use crate::lp::{solve_lp, LinearProgram, LpError, LpResult, LpStatus};

/// `‖[a_k · x + b_k]_k‖₂ <= c · x + d`
#[derive(Debug, Clone, PartialEq)]
pub struct SocConstraint {
    pub lhs: Vec<(Vec<f64>, f64)>,
    pub rhs: (Vec<f64>, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeProgram {
    pub lp: LinearProgram,
    pub socs: Vec<SocConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeOptions {
    /// Target bound on the duality gap `m / t`, relative to `max(1, |value|)`.
    pub gap_tol: f64,
    pub max_newton: usize,
    pub mu: f64,
}

impl Default for ConeOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-11,
            max_newton: 4000,
            mu: 10.0,
        }
    }
}

pub fn solve_cone(p: &ConeProgram) -> Result<LpResult, LpError> {
    solve_cone_with(p, &ConeOptions::default())
}

pub fn solve_cone_with(p: &ConeProgram, opts: &ConeOptions) -> Result<LpResult, LpError> {
    p.lp.validate()?;
    if p.socs.is_empty() {
        return solve_lp(&p.lp);
    }
    let n = p.lp.num_vars();
    for soc in &p.socs {
        if soc.rhs.0.len() != n || soc.lhs.iter().any(|(a, _)| a.len() != n) {
            return Err(LpError::RowLength {
                kind: "cone rows",
                row: 0,
                found: soc.rhs.0.len(),
                expected: n,
            });
        }
    }

    let Some(pre) = presolve(&p.lp)? else {
        return Ok(infeasible());
    };

    let mut eq_rows: Vec<Vec<f64>> = p.lp.a_eq.clone();
    let mut eq_rhs: Vec<f64> = p.lp.b_eq.clone();
    let mut strict = Vec::new();
    for (i, row) in p.lp.a_ub.iter().enumerate() {
        if pre.implicit[i] {
            eq_rows.push(row.clone());
            eq_rhs.push(p.lp.b_ub[i]);
        } else {
            strict.push(i);
        }
    }

    let e = linalg::rows(&eq_rows, n);
    let mut x0 = pre.point.clone();
    if !eq_rows.is_empty() {
        let resid: Vec<f64> = eq_rows
            .iter()
            .zip(&eq_rhs)
            .map(|(r, b)| dot(r, &x0) - b)
            .collect();
        let corr = linalg::lstsq(&e, &resid);
        for (x, c) in x0.iter_mut().zip(&corr) {
            *x -= c;
        }
    }
    let basis = linalg::null_space(&e, n, 1e-10);
    let k = basis.ncols();
    let lift = |z: &[f64]| -> Vec<f64> {
        let mut x = x0.clone();
        for j in 0..k {
            for i in 0..n {
                x[i] += basis[(i, j)] * z[j];
            }
        }
        x
    };
    let project = |row: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|j| (0..n).map(|i| row[i] * basis[(i, j)]).sum())
            .collect()
    };

    let mut reduced = Reduced {
        c: project(&p.lp.objective),
        lin: Vec::new(),
        socs: Vec::new(),
    };
    for &i in &strict {
        let a = project(&p.lp.a_ub[i]);
        let b = p.lp.b_ub[i] - dot(&p.lp.a_ub[i], &x0);
        if linalg::max_abs(&a) <= 1e-14 {
            if b <= 0.0 {
                return Ok(infeasible());
            }
            continue;
        }
        reduced.lin.push((a, b));
    }
    for soc in &p.socs {
        reduced.socs.push(ReducedSoc {
            rows: soc.lhs.iter().map(|(a, _)| project(a)).collect(),
            beta: soc.lhs.iter().map(|(a, b)| dot(a, &x0) + b).collect(),
            gamma: project(&soc.rhs.0),
            delta: dot(&soc.rhs.0, &x0) + soc.rhs.1,
        });
    }

    if k == 0 {
        let ok = reduced.socs.iter().all(|s| s.residual(&[]) >= -1e-12);
        if !ok {
            return Ok(infeasible());
        }
        let value = dot(&p.lp.objective, &x0);
        return Ok(LpResult {
            status: LpStatus::Optimal,
            solution: x0,
            value,
        });
    }

    // A box keeps the barrier bounded along recession directions that only
    // increase slack; touching it at the optimum means the program is unbounded.
    let radius = 1e6 * (1.0 + linalg::max_abs(&x0));
    for j in 0..k {
        let e = linalg::unit(k, j);
        reduced.lin.push((e.clone(), radius));
        reduced.lin.push((linalg::neg(&e), radius));
    }

    let mut z = vec![0.0; k];
    if !reduced.strictly_feasible(&z) {
        match phase_one(&reduced, opts)? {
            Some(start) => z = start,
            None => return Ok(infeasible()),
        }
    }

    match reduced.barrier(z, opts, None)? {
        BarrierEnd::Converged(z) | BarrierEnd::Stopped(z) if linalg::max_abs(&z) < 0.5 * radius => {
            let x = lift(&z);
            let value = dot(&p.lp.objective, &x);
            Ok(LpResult {
                status: LpStatus::Optimal,
                solution: x,
                value,
            })
        }
        _ => Ok(LpResult {
            status: LpStatus::Unbounded,
            solution: Vec::new(),
            value: f64::NEG_INFINITY,
        }),
    }
}

fn infeasible() -> LpResult {
    LpResult {
        status: LpStatus::Infeasible,
        solution: Vec::new(),
        value: f64::NAN,
    }
}

struct Presolved {
    point: Vec<f64>,
    implicit: Vec<bool>,
}

/// Finds a point where every inequality that can be strict is strict.
fn presolve(lp: &LinearProgram) -> Result<Option<Presolved>, LpError> {
    let n = lp.num_vars();
    let m = lp.a_ub.len();
    let mut obj = vec![0.0; n + m];
    for s in obj[n..].iter_mut() {
        *s = -1.0;
    }
    let mut aux = LinearProgram::new(obj);
    for (i, (row, &b)) in lp.a_ub.iter().zip(&lp.b_ub).enumerate() {
        let mut r = row.clone();
        r.resize(n + m, 0.0);
        r[n + i] = 1.0;
        aux = aux.le(r, b);
        let mut cap = vec![0.0; n + m];
        cap[n + i] = 1.0;
        aux = aux.le(cap.clone(), 1.0).ge(cap, 0.0);
    }
    for (row, &b) in lp.a_eq.iter().zip(&lp.b_eq) {
        let mut r = row.clone();
        r.resize(n + m, 0.0);
        aux = aux.eq(r, b);
    }
    let res = solve_lp(&aux)?;
    match res.status {
        LpStatus::Optimal => Ok(Some(Presolved {
            point: res.solution[..n].to_vec(),
            implicit: res.solution[n..].iter().map(|&s| s < 1e-8).collect(),
        })),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(LpError::Barrier("presolve unbounded".into())),
    }
}

fn phase_one(r: &Reduced, opts: &ConeOptions) -> Result<Option<Vec<f64>>, LpError> {
    let k = r.c.len();
    let z0 = vec![0.0; k];
    let worst = r
        .socs
        .iter()
        .map(|s| -s.residual(&z0))
        .fold(0.0_f64, f64::max);
    let ext = |v: &[f64], last: f64| {
        let mut out = v.to_vec();
        out.push(last);
        out
    };
    let mut aux = Reduced {
        c: ext(&vec![0.0; k], 1.0),
        lin: r.lin.iter().map(|(a, b)| (ext(a, 0.0), *b)).collect(),
        socs: r
            .socs
            .iter()
            .map(|s| ReducedSoc {
                rows: s.rows.iter().map(|a| ext(a, 0.0)).collect(),
                beta: s.beta.clone(),
                gamma: ext(&s.gamma, 1.0),
                delta: s.delta,
            })
            .collect(),
    };
    aux.lin.push((ext(&vec![0.0; k], -1.0), 1.0));
    let start = ext(&z0, worst + 1.0);
    let stop = |w: &[f64]| w[k] < 0.0 && r.strictly_feasible(&w[..k]);
    match aux.barrier(start, opts, Some(&stop))? {
        BarrierEnd::Stopped(w) => Ok(Some(w[..k].to_vec())),
        BarrierEnd::Converged(w) => {
            if r.strictly_feasible(&w[..k]) {
                Ok(Some(w[..k].to_vec()))
            } else {
                Ok(None)
            }
        }
        BarrierEnd::Unbounded => Err(LpError::Barrier("phase one unbounded".into())),
    }
}

struct ReducedSoc {
    rows: Vec<Vec<f64>>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    delta: f64,
}

impl ReducedSoc {
    fn parts(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let u = dot(&self.gamma, z) + self.delta;
        let w = self
            .rows
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| dot(a, z) + b)
            .collect();
        (u, w)
    }

    /// `u - ‖w‖`, positive in the interior.
    fn residual(&self, z: &[f64]) -> f64 {
        let (u, w) = self.parts(z);
        u - euclid(&w)
    }
}

struct Reduced {
    c: Vec<f64>,
    lin: Vec<(Vec<f64>, f64)>,
    socs: Vec<ReducedSoc>,
}

enum BarrierEnd {
    Converged(Vec<f64>),
    Stopped(Vec<f64>),
    Unbounded,
}

impl Reduced {
    fn weight(&self) -> f64 {
        (self.lin.len() + 2 * self.socs.len()) as f64
    }

    fn strictly_feasible(&self, z: &[f64]) -> bool {
        self.lin.iter().all(|(a, b)| b - dot(a, z) > 0.0)
            && self.socs.iter().all(|s| s.residual(z) > 0.0)
    }

    /// Barrier objective `t c·z + φ(z)`, or `None` outside the interior.
    fn value(&self, z: &[f64], t: f64) -> Option<f64> {
        let mut f = t * dot(&self.c, z);
        for (a, b) in &self.lin {
            let s = b - dot(a, z);
            if s <= 0.0 {
                return None;
            }
            f -= s.ln();
        }
        for soc in &self.socs {
            let (u, w) = soc.parts(z);
            let nw = euclid(&w);
            if u <= nw {
                return None;
            }
            f -= ((u - nw) * (u + nw)).ln();
        }
        Some(f)
    }

    fn grad_hess(&self, z: &[f64], t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let k = z.len();
        let mut g = DVector::from_iterator(k, self.c.iter().map(|c| t * c));
        let mut h = DMatrix::zeros(k, k);
        for (a, b) in &self.lin {
            let s = b - dot(a, z);
            let av = DVector::from_column_slice(a);
            g += &av / s;
            h.ger(1.0 / (s * s), &av, &av, 1.0);
        }
        for soc in &self.socs {
            let (u, w) = soc.parts(z);
            let nw = euclid(&w);
            let d = (u - nw) * (u + nw);
            let gamma = DVector::from_column_slice(&soc.gamma);
            let bmat = DMatrix::from_fn(soc.rows.len(), k, |i, j| soc.rows[i][j]);
            let wv = DVector::from_column_slice(&w);
            // ∇D = 2(u γ - Bᵀw), ∇²D = 2(γγᵀ - BᵀB)
            let grad_d = (&gamma * u - bmat.transpose() * &wv) * 2.0;
            g -= &grad_d / d;
            h.ger(1.0 / (d * d), &grad_d, &grad_d, 1.0);
            h.ger(-2.0 / d, &gamma, &gamma, 1.0);
            h += bmat.transpose() * &bmat * (2.0 / d);
        }
        (g, h)
    }

    fn barrier(
        &self,
        mut z: Vec<f64>,
        opts: &ConeOptions,
        stop: Option<&dyn Fn(&[f64]) -> bool>,
    ) -> Result<BarrierEnd, LpError> {
        let m = self.weight();
        let mut t = 1.0;
        let mut newton = 0usize;
        loop {
            // Centering.
            loop {
                let (g, h) = self.grad_hess(&z, t);
                let step = solve_spd(h, -&g)
                    .ok_or_else(|| LpError::Barrier("singular Newton system".into()))?;
                let dec = -g.dot(&step);
                if !(dec.is_finite()) {
                    return Err(LpError::Barrier("non-finite Newton decrement".into()));
                }
                if dec / 2.0 <= 1e-10 {
                    break;
                }
                let f0 = self.value(&z, t).expect("iterate is interior");
                let mut alpha = 1.0;
                let mut moved = false;
                for _ in 0..80 {
                    let cand: Vec<f64> = z
                        .iter()
                        .zip(step.iter())
                        .map(|(zi, si)| zi + alpha * si)
                        .collect();
                    if let Some(f1) = self.value(&cand, t) {
                        if f1 <= f0 - 0.25 * alpha * dec {
                            // progress below rounding of the objective ends centering
                            moved = f0 - f1 > 1e-14 * f0.abs().max(1.0);
                            z = cand;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                newton += 1;
                if let Some(stop) = stop {
                    if stop(&z) {
                        return Ok(BarrierEnd::Stopped(z));
                    }
                }
                if euclid(&z) > 1e12 {
                    return Ok(BarrierEnd::Unbounded);
                }
                if !moved || newton > opts.max_newton {
                    break;
                }
            }
            if let Some(stop) = stop {
                if stop(&z) {
                    return Ok(BarrierEnd::Stopped(z));
                }
            }
            let scale = dot(&self.c, &z).abs().max(1.0);
            if m / t <= opts.gap_tol * scale || newton > opts.max_newton {
                return Ok(BarrierEnd::Converged(z));
            }
            t *= opts.mu;
        }
    }
}

fn solve_spd(h: DMatrix<f64>, rhs: DVector<f64>) -> Option<DVector<f64>> {
    let k = h.nrows();
    let diag = (0..k).fold(0.0_f64, |a, i| a.max(h[(i, i)].abs()));
    let mut reg = 0.0;
    for _ in 0..12 {
        let mut m = h.clone();
        for i in 0..k {
            m[(i, i)] += reg;
        }
        if let Some(ch) = m.cholesky() {
            let s = ch.solve(&rhs);
            if s.iter().all(|v| v.is_finite()) {
                return Some(s);
            }
        }
        reg = if reg == 0.0 {
            1e-14 * diag.max(1e-300)
        } else {
            reg * 100.0
        };
    }
    h.lu().solve(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_program(c: Vec<f64>, radius: f64) -> ConeProgram {
        let n = c.len();
        ConeProgram {
            lp: LinearProgram::new(c),
            socs: vec![SocConstraint {
                lhs: (0..n).map(|i| (linalg::unit(n, i), 0.0)).collect(),
                rhs: (vec![0.0; n], radius),
            }],
        }
    }

    #[test]
    fn linear_objective_over_ball() {
        let r = solve_cone(&ball_program(vec![3.0, 4.0], 2.0)).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 10.0).abs() < 1e-9, "{}", r.value);
        assert!((r.solution[0] + 1.2).abs() < 1e-5);
    }

    #[test]
    fn ball_cut_by_halfplanes() {
        // max x + y over unit disc with x <= 0.5: optimum at (0.5, sqrt(.75))
        let mut p = ball_program(vec![-1.0, -1.0], 1.0);
        p.lp = p.lp.le(vec![1.0, 0.0], 0.5);
        let r = solve_cone(&p).unwrap();
        let expect = 0.5 + 0.75_f64.sqrt();
        assert!((r.value + expect).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn implicit_equalities_are_handled() {
        // x >= 0 and x <= 0 pin x; maximise y in the unit disc.
        let mut p = ball_program(vec![0.0, -1.0], 1.0);
        p.lp = p.lp.le(vec![1.0, 0.0], 0.0).ge(vec![1.0, 0.0], 0.0);
        let r = solve_cone(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 1.0).abs() < 1e-9);
        assert!(r.solution[0].abs() < 1e-12);
    }

    #[test]
    fn phase_one_finds_interior_away_from_origin() {
        // ‖x - (3, 0)‖ <= 1, minimise x0.
        let p = ConeProgram {
            lp: LinearProgram::new(vec![1.0, 0.0]),
            socs: vec![SocConstraint {
                lhs: vec![(vec![1.0, 0.0], -3.0), (vec![0.0, 1.0], 0.0)],
                rhs: (vec![0.0, 0.0], 1.0),
            }],
        };
        let r = solve_cone(&p).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn disjoint_constraints_are_infeasible() {
        let mut p = ball_program(vec![1.0, 0.0], 1.0);
        p.lp = p.lp.ge(vec![1.0, 0.0], 2.0);
        assert_eq!(solve_cone(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn free_direction_is_unbounded() {
        // ‖y‖ <= 1 leaves x free; minimise x.
        let p = ConeProgram {
            lp: LinearProgram::new(vec![1.0, 0.0]),
            socs: vec![SocConstraint {
                lhs: vec![(vec![0.0, 1.0], 0.0)],
                rhs: (vec![0.0, 0.0], 1.0),
            }],
        };
        assert_eq!(solve_cone(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn slack_increasing_direction_is_not_unbounded() {
        // max d s.t. d <= x, ‖x‖ <= 1: d can also run to -inf.
        let mut p = ball_program(vec![0.0, 0.0], 1.0);
        p.lp = LinearProgram::new(vec![0.0, 0.0, -1.0]).le(vec![-1.0, 0.0, 1.0], 0.0);
        p.socs[0].lhs = vec![(vec![1.0, 0.0, 0.0], 0.0), (vec![0.0, 1.0, 0.0], 0.0)];
        p.socs[0].rhs = (vec![0.0, 0.0, 0.0], 1.0);
        let r = solve_cone(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value + 1.0).abs() < 1e-9, "{}", r.value);
    }
}
