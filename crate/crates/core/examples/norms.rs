//! Evaluates norms, dual norms and norming functionals, and shows the JSON
//! form of a norm specification.

use equinorm::norms::{dual_norm_eval, norm_eval, norming_functional, NormSpec};

fn main() {
    let v = [1.0, -2.0, 0.5];
    let specs = [
        NormSpec::l1(),
        NormSpec::l2(),
        NormSpec::linf(),
        NormSpec::lp(3.0),
        NormSpec::max_of(vec![NormSpec::l1(), NormSpec::scaled(2.0, NormSpec::linf())]),
    ];
    for spec in &specs {
        let f = norming_functional(spec, &v).expect("nonzero vector");
        println!(
            "{:<8} ‖v‖ = {:.6}  ‖v‖_* = {:.6}  f = {:?}",
            spec.variant_name(),
            norm_eval(spec, &v).unwrap(),
            dual_norm_eval(spec, &v).unwrap(),
            f.coeffs
        );
    }
    println!("{}", serde_json::to_string(&specs[4]).unwrap());
}
