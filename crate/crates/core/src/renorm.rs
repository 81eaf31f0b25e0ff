//! Renorming that makes a bounded, separated antipodal set equilateral.
//!
//! Given `S` in the unit ball with constants `(1, c, d)`, the body
//! `K = conv((d/c)·B ∪ {x − y : x, y ∈ S})` satisfies `(d/c)·B ⊆ K ⊆ 2·B`,
//! its gauge is within factor `2c/d` of the original norm, and every
//! difference `x − y` lies on the boundary of `K`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antipodal::{antipodal_from_biorthogonal, AntipodalCertificate, AntipodalError, BiorthogonalSystem};
use crate::equilateral::{verify_equilateral, EquilateralError, EquilateralReport};
use crate::linalg::{self, dot};
use crate::norms::{dual_norm_eval, norm_eval, NormError, NormSpec};
use crate::points::PointSet;
use crate::sampling;

/// Tolerance for re-verifying certificates handed to the builders.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenormError {
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Antipodal(#[from] AntipodalError),
    #[error(transparent)]
    Equilateral(#[from] EquilateralError),
    #[error("certificate does not verify: {0}")]
    InvalidCertificate(String),
    #[error("certificate has c1 = {0}; rescale the points into the unit ball first")]
    NotInUnitBall(f64),
    #[error("certificate points differ from the given point set")]
    PointsMismatch,
    #[error("system vector {index} has norm {norm}, expected 1")]
    NotNormalized { index: usize, norm: f64 },
    #[error("n_dirs must be positive")]
    NoDirections,
}

/// Sampled sandwich statistics of `‖v‖_K / ‖v‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditStats {
    pub n_dirs: usize,
    pub seed: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `1/2`
    pub lower_bound: f64,
    /// `c/d`
    pub upper_bound: f64,
    /// `max_ratio / min_ratio`, an empirical distortion at most `2c/d`.
    pub empirical_distortion: f64,
    pub tol: f64,
    pub violations: usize,
    pub passed: bool,
}

/// Support-functional lower bounds, one per pair: with `h = f/m`,
/// `h·(x_j − x_i) = 1` while `h <= 1` on all of `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCheck {
    /// `min_ij h_ij·(x_j − x_i)`
    pub min_value_at_pair: f64,
    /// `max_ij max_w |h_ij·w|`
    pub max_on_generators: f64,
    /// `max_ij rho·‖h_ij‖_*`
    pub max_on_ball: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormResult {
    pub new_norm: NormSpec,
    pub rho: f64,
    pub c: f64,
    pub d: f64,
    pub distortion_bound: f64,
    pub points: PointSet,
    /// Pairwise distances in the new norm.
    pub report: EquilateralReport,
    pub lower_bounds: LowerBoundCheck,
    pub audit: Option<AuditStats>,
}

fn lower_bound_check(cert: &AntipodalCertificate, rho: f64, spec: &NormSpec, generators: &[Vec<f64>]) -> Result<LowerBoundCheck, RenormError> {
    let rows: Vec<(f64, f64, f64)> = cert
        .pairs
        .par_iter()
        .map(|p| {
            let h = linalg::scale(&p.functional, 1.0 / p.margin);
            let at_pair = dot(&h, &linalg::sub(&cert.points[p.j], &cert.points[p.i]));
            let on_w = generators.iter().map(|w| dot(&h, w).abs()).fold(0.0, f64::max);
            let on_ball = rho * dual_norm_eval(spec, &h)?;
            Ok((at_pair, on_w, on_ball))
        })
        .collect::<Result<_, NormError>>()?;
    let min_value_at_pair = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_on_generators = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_on_ball = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(LowerBoundCheck {
        min_value_at_pair,
        max_on_generators,
        max_on_ball,
        passed: min_value_at_pair >= 1.0 - 1e-9 && max_on_generators <= 1.0 + 1e-9 && max_on_ball <= 1.0 + 1e-9,
    })
}

/// Differences `x_i − x_j` for `i < j`; their negatives are implicit.
pub fn difference_generators(s: &PointSet) -> Vec<Vec<f64>> {
    s.pairs()
        .into_iter()
        .map(|(i, j)| linalg::sub(&s.points[i], &s.points[j]))
        .collect()
}

pub fn build_antipodal_renorm(
    spec: &NormSpec,
    s: &PointSet,
    cert: &AntipodalCertificate,
) -> Result<RenormResult, RenormError> {
    s.validate().map_err(AntipodalError::from)?;
    if cert.points != s.points {
        return Err(RenormError::PointsMismatch);
    }
    if cert.c1 > 1.0 + CERTIFICATE_TOL {
        return Err(RenormError::NotInUnitBall(cert.c1));
    }
    let check = cert.verify(spec, CERTIFICATE_TOL)?;
    if !check.passed {
        return Err(RenormError::InvalidCertificate(check.failures.join("; ")));
    }
    let (c, d) = (cert.c2, cert.d);
    let rho = d / c;
    let generators = difference_generators(s);
    let lower_bounds = lower_bound_check(cert, rho, spec, &generators)?;
    let new_norm = NormSpec::hull_gauge(rho, spec.clone(), generators);
    let report = verify_equilateral(&new_norm, s, 1e-6)?;
    Ok(RenormResult {
        new_norm,
        rho,
        c,
        d,
        distortion_bound: 2.0 * c / d,
        points: s.clone(),
        report,
        lower_bounds,
        audit: None,
    })
}

/// Renorming from a normalised bounded biorthogonal system: constants
/// `(1, c, 1)` with `c` the largest functional norm, distortion `2c`.
pub fn corollary_renorm(spec: &NormSpec, sys: &BiorthogonalSystem) -> Result<RenormResult, RenormError> {
    for (index, x) in sys.vectors.iter().enumerate() {
        let norm = norm_eval(spec, x)?;
        if (norm - 1.0).abs() > CERTIFICATE_TOL {
            return Err(RenormError::NotNormalized { index, norm });
        }
    }
    let cert = antipodal_from_biorthogonal(spec, sys)?;
    let s = PointSet {
        points: sys.vectors.clone(),
        labels: None,
    };
    build_antipodal_renorm(spec, &s, &cert)
}

/// Samples `n_dirs` seeded directions and checks
/// `‖v‖/2 − tol <= ‖v‖_K <= (c/d)‖v‖ + tol` on each.
pub fn bm_bound_audit(
    original: &NormSpec,
    result: &RenormResult,
    n_dirs: usize,
    seed: u64,
    tol: f64,
) -> Result<AuditStats, RenormError> {
    if n_dirs == 0 {
        return Err(RenormError::NoDirections);
    }
    let dim = result.points.dim();
    let upper_bound = result.c / result.d;
    let ratios: Vec<f64> = sampling::directions(dim, n_dirs, seed)
        .par_iter()
        .map(|v| {
            let r = norm_eval(original, v)?;
            let u = linalg::scale(v, 1.0 / r);
            norm_eval(&result.new_norm, &u)
        })
        .collect::<Result<_, NormError>>()?;
    let violations = ratios
        .iter()
        .filter(|&&g| g < 0.5 - tol || g > upper_bound + tol)
        .count();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(AuditStats {
        n_dirs,
        seed,
        min_ratio,
        max_ratio,
        lower_bound: 0.5,
        upper_bound,
        empirical_distortion: max_ratio / min_ratio,
        tol,
        violations,
        passed: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antipodal::certify_antipodal;

    #[test]
    fn euclidean_basis() {
        let spec = NormSpec::l2();
        let sys = BiorthogonalSystem::standard(&spec, 3).unwrap();
        let r = corollary_renorm(&spec, &sys).unwrap();
        assert_eq!(r.distortion_bound, 2.0);
        assert!(r.report.max_abs_deviation < 1e-6);
        assert!((r.report.lambda - 1.0).abs() < 1e-6);
        assert!(r.lower_bounds.passed, "{:?}", r.lower_bounds);
        let a = bm_bound_audit(&spec, &r, 200, 1, 1e-9).unwrap();
        assert!(a.passed, "{a:?}");
        assert!(a.min_ratio >= 0.5 && a.max_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn two_point_set() {
        let spec = NormSpec::lp(1.0);
        let s = PointSet::new(vec![vec![0.0, 0.0], vec![0.3, -0.4]]).unwrap();
        let cert = certify_antipodal(&spec, &s, 1.0).unwrap();
        let r = build_antipodal_renorm(&spec, &s, cert.certificate().unwrap()).unwrap();
        assert!((r.new_norm.eval(&[0.3, -0.4]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn points_outside_the_ball_are_rejected() {
        let spec = NormSpec::l2();
        let s = PointSet::new(vec![vec![0.0, 0.0], vec![3.0, 0.0]]).unwrap();
        let cert = certify_antipodal(&spec, &s, 1.0).unwrap();
        assert!(matches!(
            build_antipodal_renorm(&spec, &s, cert.certificate().unwrap()),
            Err(RenormError::NotInUnitBall(_))
        ));
    }

    #[test]
    fn unnormalized_system_is_rejected() {
        let spec = NormSpec::l2();
        let sys = BiorthogonalSystem::new(&spec, vec![vec![2.0, 0.0], vec![0.0, 1.0]], vec![vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(corollary_renorm(&spec, &sys), Err(RenormError::NotNormalized { index: 0, .. })));
    }

    #[test]
    fn identity_renorm_audits_to_one() {
        let spec = NormSpec::l2();
        let r = RenormResult {
            new_norm: NormSpec::hull_gauge(1.0, spec.clone(), vec![]),
            rho: 1.0,
            c: 1.0,
            d: 1.0,
            distortion_bound: 2.0,
            points: PointSet::standard_basis(2),
            report: verify_equilateral(&spec, &PointSet::standard_basis(2), 1e-9).unwrap(),
            lower_bounds: LowerBoundCheck {
                min_value_at_pair: 1.0,
                max_on_generators: 0.0,
                max_on_ball: 1.0,
                passed: true,
            },
            audit: None,
        };
        let a = bm_bound_audit(&spec, &r, 100, 0, 1e-12).unwrap();
        assert!((a.min_ratio - 1.0).abs() < 1e-12 && (a.max_ratio - 1.0).abs() < 1e-12);
    }
}
