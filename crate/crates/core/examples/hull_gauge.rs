//! Gauge of `conv(rho·B ∪ ±W)` on the sup-norm and Euclidean planes.

use equinorm::norms::{gauge_of_hull, NormSpec};

fn main() {
    let w = vec![vec![2.0, 0.0], vec![0.5, 1.5]];
    for ambient in [NormSpec::linf(), NormSpec::l2()] {
        for v in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.3, -0.7]] {
            let g = gauge_of_hull(0.5, &ambient, &w, &v).unwrap();
            println!("{:?} v = {v:?}: {g:.9}", ambient);
        }
    }
}
