//! Property tests for the norm axioms, LP optimality and certificate algebra.

use equinorm::antipodal::{certify_antipodal, RescaleMode};
use equinorm::lp::{solve_lp, LpStatus};
use equinorm::norms::{dual_norm_eval, norm_eval, norming_functional, NormSpec};
use equinorm::oracle::lp_vertex_enumeration;
use equinorm::points::PointSet;
use equinorm::suite::{random_lp, variant_instances};
use proptest::prelude::*;

fn vec_in(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_axioms(k in 0usize..12, x in vec_in(5), y in vec_in(5), a in -3.0..3.0f64) {
        let (_, spec, dim) = variant_instances().unwrap().swap_remove(k);
        let (x, y) = (&x[..dim], &y[..dim]);
        let n = |v: &[f64]| norm_eval(&spec, v).unwrap();
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let sum: Vec<f64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
        prop_assert!((n(&ax) - a.abs() * n(x)).abs() <= 1e-9);
        prop_assert!((n(&neg) - n(x)).abs() <= 1e-9);
        prop_assert!(n(&sum) <= n(x) + n(y) + 1e-9);
        prop_assert!(n(x) >= 0.0);
    }

    #[test]
    fn norming_functional_attains_and_is_dual_unit(x in vec_in(3), which in 0usize..5) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let spec = [NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::lp(3.0),
            NormSpec::polyhedral(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]])][which].clone();
        let f = norming_functional(&spec, &x).unwrap();
        let nx = norm_eval(&spec, &x).unwrap();
        prop_assert!((f.apply(&x) - nx).abs() <= 1e-8 * nx.max(1.0));
        prop_assert!((dual_norm_eval(&spec, &f.coeffs).unwrap() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn simplex_matches_vertex_enumeration(seed in any::<u64>()) {
        let lp = random_lp(seed);
        let res = solve_lp(&lp).unwrap();
        match lp_vertex_enumeration(&lp, 1e-9) {
            Some(v) => {
                prop_assert_eq!(res.status, LpStatus::Optimal);
                prop_assert!((res.value - v).abs() <= 1e-9);
                prop_assert!(lp.max_violation(&res.solution) <= 1e-9);
            }
            None => prop_assert_eq!(res.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn rescaling_round_trips(lambda in 0.05..20.0f64, points_mode in any::<bool>()) {
        let out = certify_antipodal(&NormSpec::linf(), &PointSet::cube_vertices(2), 1.0).unwrap();
        let cert = out.certificate().unwrap();
        let mode = if points_mode { RescaleMode::ScalePoints } else { RescaleMode::ScaleFunctionals };
        let back = cert.rescale(lambda, mode).unwrap().rescale(1.0 / lambda, mode).unwrap();
        prop_assert!((back.c1 - cert.c1).abs() <= 1e-12);
        prop_assert!((back.c2 - cert.c2).abs() <= 1e-12);
        prop_assert!((back.d - cert.d).abs() <= 1e-12);
        let scaled = cert.rescale(lambda, mode).unwrap();
        prop_assert!(scaled.verify(&NormSpec::linf(), 1e-9).unwrap().passed || points_mode);
    }

    #[test]
    fn certified_sets_have_positive_d(pts in prop::collection::vec(vec_in(2), 2..5)) {
        let Ok(s) = PointSet::new(pts) else { return Ok(()) };
        if let Some(c) = certify_antipodal(&NormSpec::l1(), &s, 1.0).unwrap().certificate() {
            prop_assert!(c.d > 0.0);
            prop_assert!(c.verify(&NormSpec::l1(), 1e-9).unwrap().passed);
        }
    }
}
