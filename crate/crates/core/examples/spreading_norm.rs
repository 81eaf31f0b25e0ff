//! Spreading composite norm on R⁸: differences and sums of unit vectors all
//! have the same length.

use equinorm::linalg;
use equinorm::norms::{spreading_composite_norm, NormSpec};

fn main() {
    let spec = NormSpec::spreading(NormSpec::l2(), NormSpec::l2(), 2, 0.1);
    let e = |i| linalg::unit(8, i);
    for (i, j) in [(0, 1), (2, 7), (4, 5)] {
        let d = spreading_composite_norm(&spec, &linalg::sub(&e(i), &e(j))).unwrap();
        let s = spreading_composite_norm(&spec, &linalg::add(&e(i), &e(j))).unwrap();
        println!("e{i} - e{j}: {d:.15}   e{i} + e{j}: {s:.15}");
    }
    println!("e0: {}", spreading_composite_norm(&spec, &e(0)).unwrap());
}
