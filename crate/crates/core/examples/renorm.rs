//! Renorms the plane so that three points become equilateral, audits the
//! distortion and writes an SVG of both unit balls.

use equinorm::antipodal::certify_antipodal;
use equinorm::norms::NormSpec;
use equinorm::points::PointSet;
use equinorm::renorm::{bm_bound_audit, build_antipodal_renorm};
use equinorm::report::ball_svg;

fn main() {
    let spec = NormSpec::l2();
    let s = PointSet::new(vec![vec![0.9, 0.1], vec![-0.5, 0.6], vec![-0.2, -0.8]]).unwrap();
    let out = certify_antipodal(&spec, &s, 1.0).unwrap();
    let cert = out.certificate().expect("triangle is antipodal");
    let r = build_antipodal_renorm(&spec, &s, cert).unwrap();
    println!("rho = {:.6}, distortion bound 2c/d = {:.6}", r.rho, r.distortion_bound);
    for row in &r.report.distances {
        println!("    {row:.9?}");
    }
    let a = bm_bound_audit(&spec, &r, 500, 0, 1e-9).unwrap();
    println!("gauge/norm ratios in [{:.6}, {:.6}], bounds [{}, {:.6}]", a.min_ratio, a.max_ratio, a.lower_bound, a.upper_bound);
    let path = std::env::temp_dir().join("equinorm-renorm.svg");
    std::fs::write(&path, ball_svg(&spec, Some(&r.new_norm), &s).unwrap()).unwrap();
    println!("wrote {}", path.display());
}
