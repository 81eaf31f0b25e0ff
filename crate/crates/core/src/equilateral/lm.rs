//! Projected Levenberg–Marquardt for small nonlinear least squares.

use nalgebra::{DMatrix, DVector};

pub(crate) struct LmOptions {
    pub max_iter: usize,
    /// Stop once `max |r_i|` drops to this level.
    pub tol: f64,
}

pub(crate) struct LmResult {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Minimises `Σ r_i(x)²`. `model` returns residuals and the dense Jacobian
/// (one row per residual); `project` maps a trial point back into the
/// feasible box. Errors from `model` abort the solve.
pub(crate) fn levenberg_marquardt<E>(
    mut model: impl FnMut(&[f64]) -> Result<(Vec<f64>, DMatrix<f64>), E>,
    project: impl Fn(&mut [f64]),
    x0: Vec<f64>,
    opts: &LmOptions,
) -> Result<LmResult, E> {
    let cost = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let max_abs = |r: &[f64]| r.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut x = x0;
    let (mut r, mut jac) = model(&x)?;
    let mut c = cost(&r);
    let mut mu = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iter && max_abs(&r) > opts.tol {
        iterations += 1;
        let rv = DVector::from_column_slice(&r);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &rv;
        let scale = (0..jtj.nrows()).fold(0.0_f64, |a, i| a.max(jtj[(i, i)])).max(1e-12);
        let mut accepted = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += mu * scale;
            }
            let Some(step) = a.cholesky().map(|ch| ch.solve(&(-&g))) else {
                mu *= 10.0;
                continue;
            };
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + si).collect();
            project(&mut trial);
            let (tr, tj) = model(&trial)?;
            let tc = cost(&tr);
            if tc < c {
                x = trial;
                r = tr;
                jac = tj;
                c = tc;
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    Ok(LmResult {
        x,
        iterations,
    })
}
