//! Solves a small LP with the simplex and checks it by vertex enumeration.

use equinorm::lp::{solve_lp, LinearProgram};
use equinorm::oracle::lp_vertex_enumeration;

fn main() {
    // maximize x + 2y on a cut square
    let lp = LinearProgram::new(vec![-1.0, -2.0])
        .le(vec![1.0, 1.0], 1.5)
        .le(vec![1.0, 0.0], 1.0)
        .le(vec![0.0, 1.0], 1.0)
        .ge(vec![1.0, 0.0], -1.0)
        .ge(vec![0.0, 1.0], -1.0);
    let res = solve_lp(&lp).expect("valid program");
    println!("status {:?}, x = {:?}, value = {}", res.status, res.solution, res.value);
    println!("vertex enumeration: {:?}", lp_vertex_enumeration(&lp, 1e-9));
}
