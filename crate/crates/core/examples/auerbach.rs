//! Auerbach bases by determinant maximisation.

use equinorm::antipodal::auerbach_basis;
use equinorm::norms::NormSpec;

fn main() {
    let hex = NormSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.5, 1.0], vec![-0.5, 1.0]]);
    for (spec, dim) in [(NormSpec::linf(), 2), (NormSpec::l1(), 3), (NormSpec::l2(), 3), (hex, 2)] {
        let sys = auerbach_basis(&spec, dim).unwrap();
        println!("{:?}", spec);
        for (x, f) in sys.vectors.iter().zip(&sys.functionals) {
            println!("    x = {x:.6?}  x* = {:.6?}", f.coeffs);
        }
    }
}
