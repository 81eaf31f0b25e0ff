//! Auerbach bases by determinant maximisation.
//!
//! `det(x_1, …, x_d)` is linear in each column, with the cofactor vector as
//! coefficients, so replacing `x_i` by a support point of the unit ball in
//! the cofactor direction never decreases `|det|`. At a fixed point every
//! cofactor functional attains its dual norm at `x_i`, which makes the rows
//! of the inverse matrix an Auerbach system.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{AntipodalError, BiorthogonalSystem};
use crate::linalg::{self, dot};
use crate::norms::{dual_norm_eval, norm_eval, support_point, DualFunctional, NormSpec};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuerbachOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// Tolerance on `‖x_i‖ = ‖x_i*‖ = 1` and `x_i*(x_j) = δ_ij`.
    pub tol: f64,
}

impl Default for AuerbachOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            seed: 0,
            max_sweeps: 500,
            tol: 1e-6,
        }
    }
}

struct Ascent {
    columns: Vec<Vec<f64>>,
    det: f64,
}

fn ascend(spec: &NormSpec, dim: usize, seed: u64, max_sweeps: usize) -> Result<Ascent, AntipodalError> {
    let mut rng = sampling::rng(seed);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let g = sampling::direction(&mut rng, dim);
        let r = norm_eval(spec, &g)?;
        columns.push(linalg::scale(&g, 1.0 / r));
    }
    let mut det = linalg::determinant(&columns).abs();
    for _ in 0..max_sweeps {
        let before = det;
        for i in 0..dim {
            let m = linalg::columns(&columns);
            let d = m.determinant();
            let Some(inv) = m.try_inverse() else { break };
            let cofactor: Vec<f64> = (0..dim).map(|k| inv[(i, k)] * d).collect();
            let x = support_point(spec, &cofactor)?;
            let new_det = dot(&cofactor, &x);
            if new_det.abs() > d.abs() * (1.0 + 1e-15) {
                columns[i] = x;
            }
        }
        det = linalg::determinant(&columns).abs();
        if det <= before * (1.0 + 1e-14) {
            break;
        }
    }
    Ok(Ascent { columns, det })
}

pub fn auerbach_basis(spec: &NormSpec, dim: usize) -> Result<BiorthogonalSystem, AntipodalError> {
    auerbach_basis_with(spec, dim, &AuerbachOptions::default())
}

pub fn auerbach_basis_with(
    spec: &NormSpec,
    dim: usize,
    opts: &AuerbachOptions,
) -> Result<BiorthogonalSystem, AntipodalError> {
    if dim == 0 {
        return Err(AntipodalError::ZeroDimension);
    }
    if let Some(d) = spec.dim() {
        if d != dim {
            return Err(crate::norms::NormError::DimensionMismatch { expected: d, found: dim }.into());
        }
    }
    let runs: Vec<Ascent> = (0..opts.starts.max(1) as u64)
        .into_par_iter()
        .map(|k| ascend(spec, dim, opts.seed.wrapping_add(k), opts.max_sweeps))
        .collect::<Result<_, _>>()?;
    // first run with the largest determinant
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.det > a.det { b } else { a })
        .expect("at least one start");

    let m = linalg::columns(&best.columns);
    let inv: DMatrix<f64> = match m.clone().try_inverse() {
        Some(inv) => inv,
        None => {
            return Err(AntipodalError::Stagnated {
                best_det: best.det,
                defect: f64::INFINITY,
                best: best.columns,
            })
        }
    };
    let functionals: Vec<Vec<f64>> = (0..dim).map(|i| (0..dim).map(|k| inv[(i, k)]).collect()).collect();

    let mut defect = 0.0_f64;
    let mut fs = Vec::with_capacity(dim);
    for (i, (x, f)) in best.columns.iter().zip(&functionals).enumerate() {
        let nx = norm_eval(spec, x)?;
        let nf = dual_norm_eval(spec, f)?;
        defect = defect.max((nx - 1.0).abs()).max((nf - 1.0).abs());
        for (j, y) in best.columns.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot(f, y) - target).abs());
        }
        fs.push(DualFunctional::new(f.clone(), nf));
    }
    if defect > opts.tol {
        return Err(AntipodalError::Stagnated {
            best_det: best.det,
            defect,
            best: best.columns,
        });
    }
    Ok(BiorthogonalSystem {
        vectors: best.columns,
        functionals: fs,
        bound: 1.0,
    })
}
