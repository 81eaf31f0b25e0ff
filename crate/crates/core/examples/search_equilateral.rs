//! Multistart search for four equilateral points in a few planes and spaces.

use equinorm::equilateral::search_equilateral;
use equinorm::norms::NormSpec;

fn main() {
    for (spec, k, dim) in [(NormSpec::linf(), 4, 2), (NormSpec::l2(), 4, 3), (NormSpec::l2(), 4, 2)] {
        let r = search_equilateral(&spec, k, dim, 1).unwrap();
        println!(
            "{:?} k = {k} in R^{dim}: residual {:.2e}, equilateral {}",
            spec, r.residual, r.report.equilateral
        );
        for p in &r.points.points {
            println!("    {p:.6?}");
        }
    }
}
