//! Minimises `t ↦ ‖v − t·w‖₂ + |t|` by subgradients and compares with a grid.

use equinorm::convex::minimize_convex;
use equinorm::oracle::grid_min_1d;

fn main() {
    let (v, w) = ([3.0, 1.0], [1.0, 0.2]);
    let value = |t: f64| ((v[0] - t * w[0]).powi(2) + (v[1] - t * w[1]).powi(2)).sqrt() + t.abs();
    let f = |x: &[f64]| {
        let t = x[0];
        let r = [v[0] - t * w[0], v[1] - t * w[1]];
        let n = (r[0] * r[0] + r[1] * r[1]).sqrt();
        let g = -(r[0] * w[0] + r[1] * w[1]) / n + t.signum();
        (value(t), vec![g])
    };
    let res = minimize_convex(f, &[0.0], 1e-10).expect("converges");
    let (t, grid) = grid_min_1d(value, -10.0, 10.0, 200_000);
    println!("subgradient: t = {:.8}, f = {:.10}", res.x[0], res.value);
    println!("grid:        t = {t:.8}, f = {grid:.10}");
}
