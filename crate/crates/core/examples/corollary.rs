//! Renorming from a bounded biorthogonal system: the unit vectors of R⁴
//! become 1-equilateral with distortion at most 2c.

use equinorm::antipodal::BiorthogonalSystem;
use equinorm::norms::NormSpec;
use equinorm::renorm::{bm_bound_audit, corollary_renorm};

fn main() {
    for spec in [NormSpec::l2(), NormSpec::linf(), NormSpec::l1()] {
        let sys = BiorthogonalSystem::standard(&spec, 4).unwrap();
        let r = corollary_renorm(&spec, &sys).unwrap();
        let a = bm_bound_audit(&spec, &r, 300, 0, 1e-9).unwrap();
        println!(
            "{:?}: lambda = {:.9}, distortion bound {}, observed distortion {:.6}",
            spec, r.report.lambda, r.distortion_bound, a.empirical_distortion
        );
    }
}
