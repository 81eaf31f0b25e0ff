//! Multistart least-squares search for 1-equilateral configurations.
//!
//! Minimises `Σ_{i<j} (‖x_i − x_j‖ − 1)²` with `x_0` pinned at the origin.
//! Nothing guarantees that a configuration exists or is found; the caller
//! reads the residual.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, LmOptions};
use super::{verify_equilateral, EquilateralError, EquilateralReport, PointSet};
use crate::linalg;
use crate::norms::{norm_eval, norming_functional, NormSpec};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub max_iter: usize,
    /// Stop a start once every `|‖x_i − x_j‖ − 1|` is below this.
    pub tol: f64,
    /// Tolerance passed to the equilateral report.
    pub report_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            starts: 16,
            max_iter: 300,
            tol: 1e-14,
            report_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub points: PointSet,
    pub report: EquilateralReport,
    /// `Σ (‖x_i − x_j‖ − 1)²`
    pub residual: f64,
    /// Index of the winning start.
    pub start: usize,
}

pub fn search_equilateral(
    spec: &NormSpec,
    n_points: usize,
    dim: usize,
    seed: u64,
) -> Result<SearchResult, EquilateralError> {
    search_equilateral_with(spec, n_points, dim, seed, &SearchOptions::default())
}

fn unpack(x: &[f64], n_points: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; dim]];
    pts.extend((1..n_points).map(|k| x[(k - 1) * dim..k * dim].to_vec()));
    pts
}

fn residuals(spec: &NormSpec, pts: &[Vec<f64>]) -> Result<Vec<f64>, EquilateralError> {
    let n = pts.len();
    let mut r = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            r.push(norm_eval(spec, &linalg::sub(&pts[i], &pts[j]))? - 1.0);
        }
    }
    Ok(r)
}

fn run_start(
    spec: &NormSpec,
    n_points: usize,
    dim: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<Vec<Vec<f64>>, EquilateralError> {
    let mut rng = sampling::rng(seed);
    let x0: Vec<f64> = (1..n_points).flat_map(|_| sampling::cube(&mut rng, dim)).collect();
    let model = |x: &[f64]| -> Result<(Vec<f64>, DMatrix<f64>), EquilateralError> {
        let pts = unpack(x, n_points, dim);
        let mut r = Vec::new();
        let mut jac = DMatrix::zeros(n_points * (n_points - 1) / 2, x.len());
        let mut row = 0;
        for i in 0..n_points {
            for j in i + 1..n_points {
                let d = linalg::sub(&pts[i], &pts[j]);
                let dist = norm_eval(spec, &d)?;
                r.push(dist - 1.0);
                if dist > 0.0 {
                    let g = norming_functional(spec, &d)?.coeffs;
                    for k in 0..dim {
                        if i > 0 {
                            jac[(row, (i - 1) * dim + k)] += g[k];
                        }
                        jac[(row, (j - 1) * dim + k)] -= g[k];
                    }
                }
                row += 1;
            }
        }
        Ok((r, jac))
    };
    let res = levenberg_marquardt(
        model,
        |_| {},
        x0,
        &LmOptions {
            max_iter: opts.max_iter,
            tol: opts.tol,
        },
    )?;
    Ok(unpack(&res.x, n_points, dim))
}

pub fn search_equilateral_with(
    spec: &NormSpec,
    n_points: usize,
    dim: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchResult, EquilateralError> {
    if n_points < 2 {
        return Err(EquilateralError::TooFewPoints(n_points));
    }
    if dim == 0 {
        return Err(EquilateralError::ZeroDimension);
    }
    if let Some(d) = spec.dim() {
        if d != dim {
            return Err(crate::norms::NormError::DimensionMismatch { expected: d, found: dim }.into());
        }
    }
    let runs: Vec<(f64, Vec<Vec<f64>>)> = (0..opts.starts.max(1))
        .into_par_iter()
        .map(|k| {
            let pts = run_start(spec, n_points, dim, seed.wrapping_add(k as u64), opts)?;
            let cost = residuals(spec, &pts)?.iter().map(|r| r * r).sum::<f64>();
            Ok((cost, pts))
        })
        .collect::<Result<_, EquilateralError>>()?;
    // smallest residual, ties to the lower start index
    let (start, (residual, points)) = runs
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1 .0 < a.1 .0 { b } else { a })
        .expect("at least one start");
    let points = PointSet { points, labels: None };
    let report = verify_equilateral(spec, &points, opts.report_tol)?;
    Ok(SearchResult {
        points,
        report,
        residual,
        start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let r = search_equilateral(&NormSpec::l2(), 2, 3, 1).unwrap();
        assert!(r.residual < 1e-20);
    }

    #[test]
    fn euclidean_simplex() {
        let r = search_equilateral(&NormSpec::l2(), 4, 3, 7).unwrap();
        assert!(r.residual < 1e-10, "{}", r.residual);
        assert!(r.report.equilateral);
    }

    #[test]
    fn square_in_sup_norm_plane() {
        let r = search_equilateral(&NormSpec::linf(), 4, 2, 3).unwrap();
        assert!(r.residual < 1e-10, "{}", r.residual);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            search_equilateral(&NormSpec::l2(), 1, 2, 0),
            Err(EquilateralError::TooFewPoints(1))
        );
    }
}
