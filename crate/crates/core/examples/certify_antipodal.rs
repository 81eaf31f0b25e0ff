//! Antipodality certificates for the square and a failure for collinear points.

use equinorm::antipodal::{certify_antipodal, AntipodalOutcome};
use equinorm::norms::NormSpec;
use equinorm::points::PointSet;

fn main() {
    let square = PointSet::cube_vertices(2);
    match certify_antipodal(&NormSpec::linf(), &square, 1.0).unwrap() {
        AntipodalOutcome::Certified(c) => {
            println!("square: c1 = {}, c2 = {}, d = {}", c.c1, c.c2, c.d);
            for p in &c.pairs {
                println!("    ({}, {}): f = {:?}, margin {}", p.i, p.j, p.functional, p.margin);
            }
        }
        AntipodalOutcome::NotAntipodal(w) => println!("square: failed at {w:?}"),
    }
    let line = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
    let out = certify_antipodal(&NormSpec::l2(), &line, 1.0).unwrap();
    println!("collinear: {}", serde_json::to_string(&out).unwrap());
}
