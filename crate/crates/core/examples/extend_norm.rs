//! Extends the ℓ₁ norm of a plane in R³ to all of R³.

use equinorm::norms::{extend_norm, norm_eval, NormSpec};

fn main() {
    let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]];
    let ext = extend_norm(3, &basis, &NormSpec::l1(), &NormSpec::l2(), 2.0).expect("sandwich holds");
    if let NormSpec::SubspaceExtension { functionals, .. } = &ext {
        println!("{} extended functionals", functionals.len());
    }
    // on the plane the extension reproduces the ℓ1 norm of the coordinates
    for (a, b) in [(1.0, 0.0), (0.5, -0.5), (2.0, 1.0)] {
        let z = [a, b, b];
        println!("coords ({a}, {b}): {:.9}", norm_eval(&ext, &z).unwrap());
    }
    println!("off the plane: {:.9}", norm_eval(&ext, &[0.0, 1.0, -1.0]).unwrap());
}
