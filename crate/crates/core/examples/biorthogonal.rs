//! Certificates from biorthogonal systems, normalisation and rescaling.

use equinorm::antipodal::{antipodal_from_biorthogonal, normalize_biorthogonal, BiorthogonalSystem, RescaleMode};
use equinorm::norms::NormSpec;

fn main() {
    let spec = NormSpec::l2();
    let sys = BiorthogonalSystem::new(
        &spec,
        vec![vec![2.0, 0.0, 0.0], vec![0.0, 0.5, 0.0], vec![0.0, 0.0, 3.0]],
        vec![vec![0.5, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 1.0 / 3.0]],
    )
    .unwrap();
    let unit = normalize_biorthogonal(&spec, &sys).unwrap();
    println!("normalised vectors: {:?}", unit.vectors);
    let cert = antipodal_from_biorthogonal(&spec, &unit).unwrap();
    println!("constants (c1, c2, d) = ({}, {}, {})", cert.c1, cert.c2, cert.d);
    let doubled = cert.rescale(2.0, RescaleMode::ScaleFunctionals).unwrap();
    println!("functionals x2: ({}, {}, {})", doubled.c1, doubled.c2, doubled.d);
    let halved = cert.rescale(0.5, RescaleMode::ScalePoints).unwrap();
    println!("points x1/2:    ({}, {}, {})", halved.c1, halved.c2, halved.d);

    let bad = BiorthogonalSystem::new(
        &spec,
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![1.0, -0.5], vec![0.0, 1.0]],
    )
    .unwrap();
    println!("skewed system: {}", antipodal_from_biorthogonal(&spec, &bad).unwrap_err());
}
