//! Brute-force reference computations used to cross-check the solvers.
//!
//! None of these share code with the solvers they check: vertex enumeration
//! has its own elimination routine, the hull scan its own convex hull, and
//! the grid scan is just a grid.

use crate::lp::LinearProgram;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `1e-12`.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Optimal value of a bounded LP by enumerating every basic solution, or
/// `None` if no vertex is feasible. The caller must ensure the feasible
/// region is bounded (box constraints do this) so a vertex optimum exists.
pub fn lp_vertex_enumeration(lp: &LinearProgram, feas_tol: f64) -> Option<f64> {
    let n = lp.num_vars();
    let m_eq = lp.a_eq.len();
    if m_eq > n {
        return None;
    }
    let dot = |a: &[f64], x: &[f64]| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
    let mut best: Option<f64> = None;
    for rows in combinations(lp.a_ub.len(), n - m_eq) {
        let mut a = lp.a_eq.clone();
        let mut b = lp.b_eq.clone();
        for &r in &rows {
            a.push(lp.a_ub[r].clone());
            b.push(lp.b_ub[r]);
        }
        let Some(x) = gauss_solve(a, b) else { continue };
        let ok_ub = lp.a_ub.iter().zip(&lp.b_ub).all(|(a, &b)| dot(a, &x) <= b + feas_tol);
        let ok_eq = lp.a_eq.iter().zip(&lp.b_eq).all(|(a, &b)| (dot(a, &x) - b).abs() <= feas_tol);
        if ok_ub && ok_eq {
            let v = dot(&lp.objective, &x);
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    best
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull of planar points, counter-clockwise, by monotone chain.
pub fn convex_hull_2d(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Gauge of a convex polygon containing the origin in its interior: the
/// smallest `t` with `v ∈ t·P`.
pub fn polygon_gauge(hull: &[[f64; 2]], v: [f64; 2]) -> f64 {
    if v == [0.0, 0.0] {
        return 0.0;
    }
    let k = hull.len();
    let mut best = 0.0_f64;
    for e in 0..k {
        let (p, q) = (hull[e], hull[(e + 1) % k]);
        // edge line n·x = h with outward normal n
        let n = [q[1] - p[1], p[0] - q[0]];
        let h = n[0] * p[0] + n[1] * p[1];
        if h > 0.0 {
            best = best.max((n[0] * v[0] + n[1] * v[1]) / h);
        }
    }
    best
}

/// Polygon approximating `K = conv(rho·B ∪ ±W)` in the plane. The ambient
/// unit ball is traced by `samples` boundary points `u/‖u‖` at equally
/// spaced angles, so the polygon sits inside `K` and its gauge
/// overestimates the true one by a factor of at most `1/cos(π/samples)`
/// when the ambient norm is Euclidean.
pub fn hull_polygon_2d(
    rho: f64,
    ambient: impl Fn([f64; 2]) -> f64,
    generators: &[Vec<f64>],
    samples: usize,
) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(samples + 2 * generators.len());
    for k in 0..samples {
        let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let u = [t.cos(), t.sin()];
        let r = ambient(u);
        pts.push([rho * u[0] / r, rho * u[1] / r]);
    }
    for w in generators {
        pts.push([w[0], w[1]]);
        pts.push([-w[0], -w[1]]);
    }
    convex_hull_2d(pts)
}

/// Minimum of `f` over `n + 1` equally spaced points of `[lo, hi]`.
pub fn grid_min_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .map(|t| (t, f(t)))
        .fold((lo, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_solves_and_detects_singular() {
        let x = gauss_solve(vec![vec![0.0, 2.0], vec![1.0, 1.0]], vec![4.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
        assert!(gauss_solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn vertex_enumeration_on_square() {
        let lp = LinearProgram::new(vec![-1.0, -2.0])
            .le(vec![1.0, 0.0], 1.0)
            .le(vec![-1.0, 0.0], 1.0)
            .le(vec![0.0, 1.0], 1.0)
            .le(vec![0.0, -1.0], 1.0);
        assert_eq!(lp_vertex_enumeration(&lp, 1e-12), Some(-3.0));
        let lp = lp.eq(vec![1.0, 1.0], 5.0);
        assert_eq!(lp_vertex_enumeration(&lp, 1e-12), None);
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let h = convex_hull_2d(vec![[0.0, 0.0], [1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [0.5, 0.2]]);
        assert_eq!(h.len(), 4);
        assert_eq!(polygon_gauge(&h, [2.0, 0.5]), 2.0);
        assert_eq!(polygon_gauge(&h, [0.0, 0.0]), 0.0);
    }

    #[test]
    fn euclidean_disc_polygon() {
        let h = hull_polygon_2d(1.0, |u| (u[0] * u[0] + u[1] * u[1]).sqrt(), &[], 720);
        let g = polygon_gauge(&h, [0.3, 0.4]);
        assert!(g >= 0.5 && g <= 0.5 / (std::f64::consts::PI / 720.0).cos() + 1e-15);
    }

    #[test]
    fn grid_finds_minimum() {
        let (t, v) = grid_min_1d(|t| (t - 0.25).abs(), -1.0, 1.0, 8);
        assert_eq!((t, v), (0.25, 0.0));
    }
}
