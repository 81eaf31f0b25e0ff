//! Values computed independently of this crate (by hand, closed forms, or an
//! external conic solver) and frozen here.

use equinorm::antipodal::{certify_antipodal, separation_margin, AntipodalOutcome};
use equinorm::equilateral::{find_equilateral_c0, search_equilateral, verify_equilateral};
use equinorm::linalg;
use equinorm::norms::{dual_norm_eval, extend_norm, gauge_of_hull, norm_eval, spreading_composite_norm, NormSpec};
use equinorm::oracle::{hull_polygon_2d, polygon_gauge};
use equinorm::points::PointSet;
use equinorm::renorm::{build_antipodal_renorm, corollary_renorm};
use equinorm::antipodal::BiorthogonalSystem;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

#[test]
fn lp3_norm_and_dual() {
    let v = [1.0, -2.0, 0.5];
    close(norm_eval(&NormSpec::lp(3.0), &v).unwrap(), 2.089669598190616, 1e-12);
    close(dual_norm_eval(&NormSpec::lp(3.0), &v).unwrap(), 2.5957010334043913, 1e-9);
}

#[test]
fn euclidean_hull_gauge() {
    let w = vec![vec![1.5, 0.2], vec![-0.3, 1.2]];
    for (v, expected) in [([1.0, 1.0], 140.0 / 93.0), ([0.3, -0.7], 21.0 / 31.0), ([-1.0, 0.4], 94.0 / 93.0)] {
        close(gauge_of_hull(0.8, &NormSpec::l2(), &w, &v).unwrap(), expected, 1e-8);
    }
}

#[test]
fn polyhedral_hull_gauge() {
    let hex = NormSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
    let w = vec![vec![1.0, -1.0]];
    close(gauge_of_hull(0.6, &hex, &w, &[0.7, 0.2]).unwrap(), 1.5, 1e-12);
    close(gauge_of_hull(0.6, &hex, &w, &[-0.3, 0.9]).unwrap(), 1.3, 1e-12);
}

#[test]
fn basis_renorm_gauge_in_r3() {
    let spec = NormSpec::l2();
    let r = corollary_renorm(&spec, &BiorthogonalSystem::standard(&spec, 3).unwrap()).unwrap();
    close(r.new_norm.eval(&[1.0, 2.0, 3.0]).unwrap(), 14f64.sqrt(), 1e-8);
    close(r.new_norm.eval(&[1.0, 0.0, 0.0]).unwrap(), 1.0, 1e-8);
    close(r.new_norm.eval(&[0.5, -0.5, 0.2]).unwrap(), 19.0 / 30.0, 1e-8);
}

#[test]
fn square_renorm_matches_boundary_scan() {
    let spec = NormSpec::linf();
    let s = PointSet::cube_vertices(2);
    let out = certify_antipodal(&spec, &s, 1.0).unwrap();
    let cert = out.certificate().unwrap();
    assert_eq!(cert.d, 2.0);
    let r = build_antipodal_renorm(&spec, &s, cert).unwrap();
    assert!(r.report.max_abs_deviation < 1e-9);
    let NormSpec::HullGauge { rho, generators, .. } = &r.new_norm else {
        panic!("renorm builds a hull gauge")
    };
    let poly = hull_polygon_2d(*rho, |u| u[0].abs().max(u[1].abs()), generators, 4096);
    for (i, j) in s.pairs() {
        let d = linalg::sub(&s.points[i], &s.points[j]);
        close(polygon_gauge(&poly, [d[0], d[1]]), 1.0, 1e-3);
    }
}

#[test]
fn euclidean_basis_certificate_by_kkt() {
    // maximise f(e_j) − f(e_i) over ‖f‖₂ <= 1 with f(e_k) in between:
    // f = (e_j − e_i)/√2 gives √2, and Cauchy–Schwarz caps it there
    let out = certify_antipodal(&NormSpec::l2(), &PointSet::standard_basis(3), 1.0).unwrap();
    let AntipodalOutcome::Certified(c) = out else { panic!("basis is antipodal") };
    close(c.d, 2f64.sqrt(), 1e-8);
    for p in &c.pairs {
        let mut f = vec![0.0; 3];
        f[p.i] = -1.0 / 2f64.sqrt();
        f[p.j] = 1.0 / 2f64.sqrt();
        for (a, b) in p.functional.iter().zip(&f) {
            close(*a, *b, 1e-6);
        }
    }
    close(separation_margin(&NormSpec::l2(), &PointSet::standard_basis(3)).unwrap(), 2f64.sqrt(), 1e-8);
    close(separation_margin(&NormSpec::linf(), &PointSet::cube_vertices(2)).unwrap(), 2.0, 1e-12);
}

#[test]
fn extension_agrees_on_subspace_and_off_it() {
    let ext = extend_norm(2, &[vec![1.0, 0.0]], &NormSpec::scaled(2.0, NormSpec::l1()), &NormSpec::l2(), 0.5).unwrap();
    close(norm_eval(&ext, &[1.0, 0.0]).unwrap(), 2.0, 1e-12);
    close(norm_eval(&ext, &[0.0, 1.0]).unwrap(), 2.0, 1e-12);
}

#[test]
fn spreading_values() {
    let spec = NormSpec::spreading(NormSpec::l2(), NormSpec::l2(), 2, 0.1);
    let e = |i| linalg::unit(8, i);
    close(spreading_composite_norm(&spec, &linalg::sub(&e(0), &e(1))).unwrap(), 2f64.sqrt(), 1e-15);
    close(spreading_composite_norm(&spec, &e(0)).unwrap(), 1.0, 1e-15);
    // exhaustive enumeration of supports gives the same numbers
    let ex = NormSpec::SpreadingComposite {
        base: Box::new(NormSpec::l2()),
        model: Box::new(NormSpec::l2()),
        m: 2,
        eps: 0.1,
        exhaustive: true,
    };
    for x in [linalg::sub(&e(0), &e(1)), e(0), vec![0.3, -1.0, 0.2, 0.0, 2.0, 0.1, -0.4, 0.9]] {
        close(spreading_composite_norm(&ex, &x).unwrap(), spreading_composite_norm(&spec, &x).unwrap(), 1e-14);
    }
}

#[test]
fn sup_distances_of_three_points_by_hand() {
    let s = PointSet::new(vec![vec![0.2, -0.7, 1.1], vec![-0.4, 0.3, 0.5], vec![1.0, 0.0, -0.2]]).unwrap();
    let r = verify_equilateral(&NormSpec::linf(), &s, 1e-9).unwrap();
    // |Δ| maxima: (0.6, 1.0, 0.6) -> 1.0; (0.8, 0.7, 1.3) -> 1.3; (1.4, 0.3, 0.7) -> 1.4
    close(r.distances[0][1], 1.0, 1e-15);
    close(r.distances[0][2], 1.3, 1e-15);
    close(r.distances[1][2], 1.4, 1e-15);
    close(r.lambda, 3.7 / 3.0, 1e-15);
    close(r.max_abs_deviation, 3.7 / 3.0 - 1.0, 1e-15);
}

#[test]
fn sup_norm_fixed_point_is_trivial() {
    let run = find_equilateral_c0(&NormSpec::linf(), 8, 1e-12, 100).unwrap();
    assert!(run.state.eps.iter().all(|&e| e == 0.0));
    assert_eq!(run.report.max_abs_deviation, 0.0);
    assert_eq!(run.report.lambda, 1.0);
}

#[test]
fn half_sup_norm_violates_the_sandwich() {
    assert!(find_equilateral_c0(&NormSpec::scaled(0.5, NormSpec::linf()), 4, 1e-12, 100).is_err());
}

#[test]
fn search_recovers_a_regular_simplex() {
    let r = search_equilateral(&NormSpec::l2(), 4, 3, 11).unwrap();
    assert!(r.residual < 1e-10);
    // a regular tetrahedron of side 1 has circumradius √6/4
    let c: Vec<f64> = (0..3)
        .map(|k| r.points.points.iter().map(|p| p[k]).sum::<f64>() / 4.0)
        .collect();
    for p in &r.points.points {
        close(linalg::euclid(&linalg::sub(p, &c)), 6f64.sqrt() / 4.0, 1e-6);
    }
}
