//! Small dense helpers over `&[f64]`. Anything heavier goes through nalgebra.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

/// `y += s * x`
pub fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

pub fn euclid(a: &[f64]) -> f64 {
    let m = max_abs(a);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * a.iter().map(|x| (x / m) * (x / m)).sum::<f64>().sqrt()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

/// Matrix whose columns are the given vectors.
pub fn columns(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = vectors.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j][i])
}

/// Matrix whose rows are the given vectors.
pub fn rows(vectors: &[Vec<f64>], width: usize) -> DMatrix<f64> {
    DMatrix::from_fn(vectors.len(), width, |i, j| vectors[i][j])
}

pub fn to_vec(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

/// Numerical rank with a relative singular-value cutoff.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space of `m`, which has `n` columns.
pub fn null_space(m: &DMatrix<f64>, n: usize, rel_tol: f64) -> DMatrix<f64> {
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad to at least n rows so the SVD returns a full V.
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top == 0.0 || svd.singular_values[i] <= rel_tol * top)
        .collect();
    let mut out = DMatrix::zeros(n, cols.len());
    for (k, &i) in cols.iter().enumerate() {
        for r in 0..n {
            out[(r, k)] = v_t[(i, r)];
        }
    }
    out
}

/// Least-squares solution of `m x = b` via SVD.
pub fn lstsq(m: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    if m.nrows() == 0 {
        return vec![0.0; m.ncols()];
    }
    let svd = m.clone().svd(true, true);
    let sol = svd
        .solve(&DVector::from_column_slice(b), 1e-13)
        .expect("svd factors present");
    to_vec(&sol)
}

pub fn determinant(vectors: &[Vec<f64>]) -> f64 {
    columns(vectors).determinant()
}
