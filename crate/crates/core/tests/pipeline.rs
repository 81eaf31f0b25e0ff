//! End-to-end chains: equilateral sets certify antipodal, certificates
//! renorm, and renormed sets are equilateral again.

use equinorm::antipodal::{
    antipodal_from_biorthogonal, auerbach_basis, certify_antipodal, normalize_biorthogonal, BiorthogonalSystem,
};
use equinorm::equilateral::{find_equilateral_c0, petty_certificate, verify_equilateral};
use equinorm::norms::NormSpec;
use equinorm::points::PointSet;
use equinorm::renorm::{build_antipodal_renorm, corollary_renorm};
use equinorm::suite::{mixed_c0_norm, random_ball_points};

#[test]
fn fixed_point_output_is_antipodal_with_d_one() {
    let spec = mixed_c0_norm(8);
    let run = find_equilateral_c0(&spec, 8, 1e-12, 1000).unwrap();
    let cert = petty_certificate(&spec, &run.points, 1e-9).unwrap();
    assert!((cert.d - 1.0).abs() < 1e-9);
    assert!(cert.verify(&spec, 1e-9).unwrap().passed);
}

#[test]
fn renorm_closes_the_loop() {
    let spec = NormSpec::l2();
    let s = random_ball_points(2, 3, 5);
    let out = certify_antipodal(&spec, &s, 1.0).unwrap();
    let cert = out.certificate().expect("three points in general position");
    let r = build_antipodal_renorm(&spec, &s, cert).unwrap();
    assert!(r.report.max_abs_deviation < 1e-6, "{}", r.report.max_abs_deviation);
    assert!((r.report.lambda - 1.0).abs() < 1e-6);
    let back = petty_certificate(&r.new_norm, &s, 1e-6).unwrap();
    assert!((back.d - 1.0).abs() < 1e-6);
    assert!(back.min_slack() >= -1e-9);
}

#[test]
fn normalised_path_equals_direct_path() {
    let spec = NormSpec::l2();
    let direct = corollary_renorm(&spec, &BiorthogonalSystem::standard(&spec, 3).unwrap()).unwrap();
    let scaled = BiorthogonalSystem::new(
        &spec,
        vec![vec![2.0, 0.0, 0.0], vec![0.0, 0.25, 0.0], vec![0.0, 0.0, 5.0]],
        vec![vec![0.5, 0.0, 0.0], vec![0.0, 4.0, 0.0], vec![0.0, 0.0, 0.2]],
    )
    .unwrap();
    let via = corollary_renorm(&spec, &normalize_biorthogonal(&spec, &scaled).unwrap()).unwrap();
    assert_eq!(via.distortion_bound, direct.distortion_bound);
    for (a, b) in via.report.distances.iter().flatten().zip(direct.report.distances.iter().flatten()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn auerbach_system_certifies_with_unit_constants() {
    let hex = NormSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.5, 1.0], vec![-0.5, 1.0]]);
    for (spec, dim) in [(NormSpec::l2(), 3), (NormSpec::l1(), 3), (hex, 2)] {
        let sys = auerbach_basis(&spec, dim).unwrap();
        sys.validate(&spec).unwrap();
        match antipodal_from_biorthogonal(&spec, &sys) {
            Ok(cert) => {
                assert!((cert.c1 - 1.0).abs() < 1e-6 && (cert.c2 - 1.0).abs() < 1e-6);
                assert!((cert.d - 1.0).abs() < 1e-6);
            }
            // the chain 0 <= x*_i(x_j) is not automatic for dim >= 3;
            // a failure must name the offending pair rather than pass silently
            Err(e) => assert!(e.to_string().contains("chain"), "{e}"),
        }
    }
}

#[test]
fn cube_vertices_renorm_is_equilateral() {
    let spec = NormSpec::linf();
    let s = PointSet::cube_vertices(3);
    let out = certify_antipodal(&spec, &s, 1.0).unwrap();
    let r = build_antipodal_renorm(&spec, &s, out.certificate().unwrap()).unwrap();
    assert_eq!(r.distortion_bound, 1.0);
    assert!(verify_equilateral(&r.new_norm, &s, 1e-9).unwrap().equilateral);
}
