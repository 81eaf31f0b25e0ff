//! Equilateral sets in norms close to the sup norm.
//!
//! For `eps` in the cube `[0, 1/2]^P` indexed by pairs `n < m`, the points
//! `p_n = (eps_(1,n), …, eps_(n−1,n), −1, 0, …)` satisfy
//! `‖p_n − p_m‖_∞ = 1 + eps_(n,m)`. The map
//! `φ_(n,m)(eps) = 1 + eps_(n,m) − ‖p_n − p_m‖` sends the cube into itself
//! whenever `‖x‖ <= ‖x‖_∞ <= 1.5‖x‖`, and a fixed point makes the `p_n`
//! 1-equilateral. Pairs and coordinates are 0-based here.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, LmOptions};
use super::{verify_equilateral, EquilateralError, EquilateralReport, PointSet};
use crate::linalg;
use crate::norms::{norm_eval, norming_functional, NormSpec};
use crate::sampling;

const SANDWICH_DIRECTIONS: usize = 1000;
const SANDWICH_SEED: u64 = 0xc0;
const SANDWICH_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointStatus {
    Converged,
    MaxIter,
    Diverged,
}

/// Point of the cube `[0, 1/2]^P`, stored in lexicographic pair order
/// `(0,1), (0,2), …, (0,N−1), (1,2), …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointState {
    pub n: usize,
    pub eps: Vec<f64>,
    /// `max |φ(eps) − eps|` after each iteration.
    pub residuals: Vec<f64>,
    pub status: FixedPointStatus,
    pub iterations: usize,
    /// True when the least-squares fallback produced the final iterate.
    pub fallback_used: bool,
}

impl FixedPointState {
    pub fn num_pairs(n: usize) -> usize {
        n * n.saturating_sub(1) / 2
    }

    pub fn constant(n: usize, value: f64) -> Self {
        FixedPointState {
            n,
            eps: vec![value; Self::num_pairs(n)],
            residuals: Vec::new(),
            status: FixedPointStatus::MaxIter,
            iterations: 0,
            fallback_used: false,
        }
    }

    pub fn from_eps(n: usize, eps: Vec<f64>) -> Result<Self, EquilateralError> {
        let mut s = Self::constant(n, 0.0);
        s.eps = eps;
        s.check()?;
        Ok(s)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.eps[self.index(i, j)]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j)))
    }

    fn check(&self) -> Result<(), EquilateralError> {
        let expected = Self::num_pairs(self.n);
        if self.eps.len() != expected {
            return Err(EquilateralError::MissingPairs {
                n: self.n,
                expected,
                found: self.eps.len(),
            });
        }
        for (i, j) in self.pairs() {
            let value = self.get(i, j);
            if !(0.0..=0.5).contains(&value) {
                return Err(EquilateralError::OutOfCube { i, j, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    /// Damping: `eps ← (1 − θ) eps + θ φ(eps)`.
    pub theta: f64,
    /// Iterations without a new best residual before switching to least squares.
    pub stall_window: usize,
    pub max_lm_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            theta: 0.5,
            stall_window: 10,
            max_lm_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRun {
    pub points: PointSet,
    pub state: FixedPointState,
    pub report: EquilateralReport,
}

fn p_point(eps: &FixedPointState, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; eps.n];
    for k in 0..n {
        p[k] = eps.get(k, n);
    }
    p[n] = -1.0;
    p
}

pub fn make_p_points(eps: &FixedPointState, n: usize) -> Result<PointSet, EquilateralError> {
    if eps.n != n {
        return Err(EquilateralError::MissingPairs {
            n,
            expected: FixedPointState::num_pairs(n),
            found: eps.eps.len(),
        });
    }
    eps.check()?;
    Ok(PointSet {
        points: (0..n).map(|k| p_point(eps, k)).collect(),
        labels: None,
    })
}

fn sandwich_ok(spec: &NormSpec, x: &[f64]) -> Result<(), EquilateralError> {
    let norm = norm_eval(spec, x)?;
    let sup = linalg::max_abs(x);
    if norm > sup * (1.0 + SANDWICH_REL_TOL) || sup > 1.5 * norm * (1.0 + SANDWICH_REL_TOL) {
        return Err(EquilateralError::SandwichViolated {
            sample: x.to_vec(),
            norm,
            sup,
        });
    }
    Ok(())
}

/// `‖x‖ <= ‖x‖_∞ <= 1.5‖x‖` on seeded directions of `R^n`.
pub fn check_c0_sandwich(spec: &NormSpec, n: usize) -> Result<(), EquilateralError> {
    if n < 2 {
        return Err(EquilateralError::TooFewPoints(n));
    }
    if let Some(d) = spec.dim() {
        if d != n {
            return Err(crate::norms::NormError::DimensionMismatch { expected: d, found: n }.into());
        }
    }
    sampling::directions(n, SANDWICH_DIRECTIONS, SANDWICH_SEED)
        .par_iter()
        .map(|x| sandwich_ok(spec, x))
        .collect::<Result<Vec<()>, _>>()?;
    Ok(())
}

/// `(φ(eps), ‖p_n − p_m‖ per pair)`, checking the sandwich on every difference.
fn phi_raw(spec: &NormSpec, eps: &FixedPointState) -> Result<(Vec<f64>, Vec<f64>), EquilateralError> {
    let pts: Vec<Vec<f64>> = (0..eps.n).map(|k| p_point(eps, k)).collect();
    let pairs: Vec<(usize, usize)> = eps.pairs().collect();
    let dists: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = linalg::sub(&pts[i], &pts[j]);
            sandwich_ok(spec, &d)?;
            Ok(norm_eval(spec, &d)?)
        })
        .collect::<Result<_, EquilateralError>>()?;
    let phi = pairs
        .iter()
        .zip(&dists)
        .map(|(&(i, j), d)| (1.0 + eps.get(i, j) - d).clamp(0.0, 0.5))
        .collect();
    Ok((phi, dists))
}

pub fn phi_step(spec: &NormSpec, eps: &FixedPointState) -> Result<FixedPointState, EquilateralError> {
    eps.check()?;
    check_c0_sandwich(spec, eps.n)?;
    let (phi, _) = phi_raw(spec, eps)?;
    let mut out = eps.clone();
    out.eps = phi;
    Ok(out)
}

pub fn find_equilateral_c0(
    spec: &NormSpec,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointRun, EquilateralError> {
    find_equilateral_c0_with(spec, n, tol, max_iter, &FixedPointOptions::default())
}

pub fn find_equilateral_c0_with(
    spec: &NormSpec,
    n: usize,
    tol: f64,
    max_iter: usize,
    opts: &FixedPointOptions,
) -> Result<FixedPointRun, EquilateralError> {
    if !(tol > 0.0) {
        return Err(EquilateralError::BadParameter(format!("tol must be positive, got {tol}")));
    }
    if !(opts.theta > 0.0 && opts.theta <= 1.0) {
        return Err(EquilateralError::BadParameter(format!("theta must lie in (0, 1], got {}", opts.theta)));
    }
    check_c0_sandwich(spec, n)?;

    let mut state = FixedPointState::constant(n, 0.0);
    let mut best = (f64::INFINITY, state.eps.clone());
    let mut since_best = 0usize;
    let mut stalled = false;

    while state.iterations < max_iter {
        let (phi, _) = phi_raw(spec, &state)?;
        let residual = phi
            .iter()
            .zip(&state.eps)
            .fold(0.0_f64, |a, (p, e)| a.max((p - e).abs()));
        if !residual.is_finite() {
            state.status = FixedPointStatus::Diverged;
            break;
        }
        state.residuals.push(residual);
        if residual < best.0 {
            best = (residual, state.eps.clone());
            since_best = 0;
        } else {
            since_best += 1;
        }
        if residual <= tol {
            state.status = FixedPointStatus::Converged;
            break;
        }
        if since_best >= opts.stall_window {
            stalled = true;
            break;
        }
        state.iterations += 1;
        for (e, p) in state.eps.iter_mut().zip(&phi) {
            *e = (1.0 - opts.theta) * *e + opts.theta * p;
        }
    }

    if state.status != FixedPointStatus::Converged && state.status != FixedPointStatus::Diverged {
        state.eps = best.1;
        if stalled {
            least_squares(spec, &mut state, tol, opts.max_lm_iter)?;
        }
    }

    let points = make_p_points(&state, n)?;
    let report = verify_equilateral(spec, &points, tol)?;
    Ok(FixedPointRun { points, state, report })
}

/// Projected Levenberg–Marquardt on `r_(n,m) = ‖p_n − p_m‖ − 1 = eps − φ(eps)`.
fn least_squares(
    spec: &NormSpec,
    state: &mut FixedPointState,
    tol: f64,
    max_iter: usize,
) -> Result<(), EquilateralError> {
    let n = state.n;
    let pairs: Vec<(usize, usize)> = state.pairs().collect();
    let template = state.clone();
    let model = |x: &[f64]| -> Result<(Vec<f64>, DMatrix<f64>), EquilateralError> {
        let mut s = template.clone();
        s.eps = x.to_vec();
        let pts: Vec<Vec<f64>> = (0..n).map(|k| p_point(&s, k)).collect();
        let rows: Vec<(f64, Vec<(usize, f64)>)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let d = linalg::sub(&pts[i], &pts[j]);
                let g = norming_functional(spec, &d)?.coeffs;
                let mut entries = Vec::with_capacity(i + j);
                for k in 0..i {
                    entries.push((s.index(k, i), g[k]));
                }
                for k in 0..j {
                    entries.push((s.index(k, j), -g[k]));
                }
                Ok((norm_eval(spec, &d)? - 1.0, entries))
            })
            .collect::<Result<_, EquilateralError>>()?;
        let mut jac = DMatrix::zeros(rows.len(), x.len());
        let mut r = Vec::with_capacity(rows.len());
        for (row, (value, entries)) in rows.into_iter().enumerate() {
            r.push(value);
            for (col, v) in entries {
                jac[(row, col)] += v;
            }
        }
        Ok((r, jac))
    };
    let project = |x: &mut [f64]| {
        for v in x.iter_mut() {
            *v = v.clamp(0.0, 0.5);
        }
    };
    let res = levenberg_marquardt(model, project, state.eps.clone(), &LmOptions { max_iter, tol })?;
    state.eps = res.x;
    state.iterations += res.iterations;
    state.fallback_used = true;
    // residual in the fixed-point sense, recomputed from scratch
    let (phi, _) = phi_raw(spec, state)?;
    let residual = phi
        .iter()
        .zip(&state.eps)
        .fold(0.0_f64, |a, (p, e)| a.max((p - e).abs()));
    state.residuals.push(residual);
    state.status = if residual <= tol {
        FixedPointStatus::Converged
    } else {
        FixedPointStatus::MaxIter
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed(n: usize) -> NormSpec {
        NormSpec::max_of(vec![
            NormSpec::scaled(2.0 / 3.0, NormSpec::linf()),
            NormSpec::scaled(1.0 / (n as f64).sqrt(), NormSpec::l2()),
        ])
    }

    #[test]
    fn p_points_at_the_corners() {
        let zero = FixedPointState::constant(3, 0.0);
        let p = make_p_points(&zero, 3).unwrap();
        assert_eq!(
            p.points,
            vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, -1.0]]
        );
        let half = FixedPointState::constant(2, 0.5);
        let p = make_p_points(&half, 2).unwrap();
        assert_eq!(p.points, vec![vec![-1.0, 0.0], vec![0.5, -1.0]]);
    }

    #[test]
    fn missing_pairs_are_reported() {
        let s = FixedPointState::constant(3, 0.0);
        assert!(matches!(make_p_points(&s, 4), Err(EquilateralError::MissingPairs { .. })));
        assert!(FixedPointState::from_eps(3, vec![0.0; 2]).is_err());
    }

    #[test]
    fn sup_norm_is_a_fixed_point_everywhere() {
        let s = FixedPointState::from_eps(4, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.0]).unwrap();
        let out = phi_step(&NormSpec::linf(), &s).unwrap();
        assert!(out.eps.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn sup_norm_run_returns_zero() {
        let run = find_equilateral_c0(&NormSpec::linf(), 8, 1e-12, 100).unwrap();
        assert_eq!(run.state.status, FixedPointStatus::Converged);
        assert!(run.state.eps.iter().all(|&e| e == 0.0));
        assert_eq!(run.report.max_abs_deviation, 0.0);
    }

    #[test]
    fn mixed_norm_converges() {
        let run = find_equilateral_c0(&mixed(8), 8, 1e-12, 1000).unwrap();
        assert_eq!(run.state.status, FixedPointStatus::Converged, "{:?}", run.state.residuals);
        assert!(run.report.max_abs_deviation < 1e-10);
        assert!((run.report.lambda - 1.0).abs() < 1e-10);
    }

    #[test]
    fn half_sup_norm_violates_the_sandwich() {
        let spec = NormSpec::scaled(0.5, NormSpec::linf());
        assert!(matches!(
            find_equilateral_c0(&spec, 4, 1e-9, 10),
            Err(EquilateralError::SandwichViolated { .. })
        ));
    }

    #[test]
    fn least_squares_fallback_finds_the_fixed_point() {
        let spec = mixed(5);
        let mut state = FixedPointState::constant(5, 0.0);
        least_squares(&spec, &mut state, 1e-12, 100).unwrap();
        assert!(state.fallback_used);
        assert_eq!(state.status, FixedPointStatus::Converged, "{:?}", state.residuals);
    }
}
