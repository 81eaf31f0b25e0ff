//! Equilateral sets of N points in norms sandwiched by the sup-norm.

use equinorm::equilateral::find_equilateral_c0;
use equinorm::suite::mixed_c0_norm;

fn main() {
    for n in [8, 16, 32] {
        let spec = mixed_c0_norm(n);
        let run = find_equilateral_c0(&spec, n, 1e-12, 1000).expect("sandwich holds");
        let eps_mean = run.state.eps.iter().sum::<f64>() / run.state.eps.len() as f64;
        println!(
            "N = {n:>2}: {:?} after {} iterations, lambda = {:.15}, max deviation {:.1e}, mean eps {eps_mean:.6}",
            run.state.status, run.state.iterations, run.report.lambda, run.report.max_abs_deviation
        );
    }
}
