//! Equilateral sets: verification, the fixed-point construction in spaces
//! containing a copy of `c0`, norming-functional certificates, and a
//! generic least-squares search.

mod fixed_point;
mod lm;
mod search;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antipodal::{AntipodalCertificate, AntipodalError};
use crate::linalg;
use crate::norms::{norm_eval, norming_functional, NormError, NormSpec};
pub use crate::points::{PointSet, PointSetError};

pub use fixed_point::{
    check_c0_sandwich, find_equilateral_c0, find_equilateral_c0_with, make_p_points, phi_step, FixedPointOptions,
    FixedPointRun, FixedPointState, FixedPointStatus,
};
pub use search::{search_equilateral, search_equilateral_with, SearchOptions, SearchResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquilateralError {
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Points(#[from] PointSetError),
    #[error(transparent)]
    Certificate(#[from] AntipodalError),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("sandwich ‖x‖ <= ‖x‖_∞ <= 1.5‖x‖ fails at x = {sample:?} (‖x‖ = {norm}, ‖x‖_∞ = {sup})")]
    SandwichViolated { sample: Vec<f64>, norm: f64, sup: f64 },
    #[error("state has {found} entries, expected {expected} for N = {n}")]
    MissingPairs { n: usize, expected: usize, found: usize },
    #[error("eps entry for pair ({i}, {j}) is {value}, outside [0, 1/2]")]
    OutOfCube { i: usize, j: usize, value: f64 },
    #[error("set is not equilateral: max deviation {max_abs_deviation:e} exceeds {tol:e}")]
    NotEquilateral { max_abs_deviation: f64, tol: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// Pairwise distances of a point set compared with their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilateralReport {
    pub lambda: f64,
    pub distances: Vec<Vec<f64>>,
    /// `‖x_i − x_j‖ − lambda`; the diagonal holds `−lambda`.
    pub deviations: Vec<Vec<f64>>,
    pub max_abs_deviation: f64,
    pub tol: f64,
    pub equilateral: bool,
}

pub fn verify_equilateral(spec: &NormSpec, s: &PointSet, tol: f64) -> Result<EquilateralReport, EquilateralError> {
    s.validate()?;
    let n = s.len();
    if n < 2 {
        return Err(EquilateralError::TooFewPoints(n));
    }
    spec.check_dim(&s.points[0])?;
    let pairs = s.pairs();
    let dist: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| norm_eval(spec, &linalg::sub(&s.points[i], &s.points[j])))
        .collect::<Result<_, _>>()?;
    let lambda = dist.iter().sum::<f64>() / dist.len() as f64;
    let mut distances = vec![vec![0.0; n]; n];
    let mut deviations = vec![vec![-lambda; n]; n];
    let mut max_abs_deviation = 0.0_f64;
    for (&(i, j), &d) in pairs.iter().zip(&dist) {
        distances[i][j] = d;
        distances[j][i] = d;
        deviations[i][j] = d - lambda;
        deviations[j][i] = d - lambda;
        max_abs_deviation = max_abs_deviation.max((d - lambda).abs());
    }
    Ok(EquilateralReport {
        lambda,
        distances,
        deviations,
        max_abs_deviation,
        tol,
        equilateral: max_abs_deviation <= tol,
    })
}

/// Certificate from norming functionals: for the pair `(x_i, x_j)` the
/// functional norming `x_j − x_i` separates `S` with margin `lambda`.
/// Constants: `c1 = max ‖x‖`, `c2 = 1`, `d = ` smallest margin.
pub fn petty_certificate(spec: &NormSpec, s: &PointSet, tol: f64) -> Result<AntipodalCertificate, EquilateralError> {
    let report = verify_equilateral(spec, s, tol)?;
    if !report.equilateral {
        return Err(EquilateralError::NotEquilateral {
            max_abs_deviation: report.max_abs_deviation,
            tol,
        });
    }
    let functionals: Vec<((usize, usize), Vec<f64>)> = s
        .pairs()
        .into_par_iter()
        .map(|(i, j)| {
            norming_functional(spec, &linalg::sub(&s.points[j], &s.points[i])).map(|f| ((i, j), f.coeffs))
        })
        .collect::<Result<_, _>>()?;
    Ok(AntipodalCertificate::from_functionals(spec, &s.points, functionals, 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_distances() {
        let r = verify_equilateral(&NormSpec::l1(), &PointSet::standard_basis(3), 1e-12).unwrap();
        assert_eq!(r.lambda, 2.0);
        assert_eq!(r.max_abs_deviation, 0.0);
        assert!(r.equilateral);
        let r = verify_equilateral(&NormSpec::l2(), &PointSet::standard_basis(3), 1e-12).unwrap();
        assert!((r.lambda - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn singleton_is_rejected() {
        let s = PointSet::new(vec![vec![1.0]]).unwrap();
        assert_eq!(
            verify_equilateral(&NormSpec::l2(), &s, 1e-9),
            Err(EquilateralError::TooFewPoints(1))
        );
    }

    #[test]
    fn petty_on_l1_basis() {
        let spec = NormSpec::l1();
        let s = PointSet::standard_basis(3);
        let cert = petty_certificate(&spec, &s, 1e-12).unwrap();
        assert_eq!(cert.d, 2.0);
        assert_eq!(cert.c2, 1.0);
        assert!(cert.min_slack() >= 0.0);
        assert!(cert.verify(&spec, 1e-12).unwrap().passed);
    }

    #[test]
    fn petty_on_two_points() {
        let spec = NormSpec::lp(3.0);
        let s = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let cert = petty_certificate(&spec, &s, 1e-12).unwrap();
        assert!((cert.d - spec.eval(&[1.0, 2.0]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn petty_rejects_non_equilateral() {
        let s = PointSet::new(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        assert!(matches!(
            petty_certificate(&NormSpec::l2(), &s, 1e-9),
            Err(EquilateralError::NotEquilateral { .. })
        ));
    }
}
