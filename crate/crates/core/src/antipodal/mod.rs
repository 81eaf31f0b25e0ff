//! Antipodal sets and their certificates.
//!
//! A finite set `S` is antipodal with constants `(c1, c2, d)` when every
//! point has norm at most `c1` and every pair `x != y` admits a functional
//! `f` with `‖f‖_* <= c2`, `f(y) − f(x) >= d` and `f(x) <= f(z) <= f(y)` for
//! all `z ∈ S`. Certificates store one functional per unordered pair
//! `i < j`, oriented so that `x_i` is the low end; `−f` serves `(j, i)`.

mod auerbach;
mod biorthogonal;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::dot;
use crate::norms::{dual_norm_eval, encode_dual, norm_eval, NormError, NormSpec};
use crate::points::{PointSet, PointSetError};
use crate::program::{Affine, ProgramBuilder, SolveError};

pub use auerbach::{auerbach_basis, auerbach_basis_with, AuerbachOptions};
pub use biorthogonal::{antipodal_from_biorthogonal, normalize_biorthogonal, BiorthogonalSystem};

/// Margins at or below this are treated as "no separating functional".
pub const MIN_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AntipodalError {
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Points(#[from] PointSetError),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("c2 must be positive, got {0}")]
    BadDualBound(f64),
    #[error("inequality chain 0 <= x*_{functional}(x_{vector}) <= 1 fails: value {value}")]
    ChainViolated {
        functional: usize,
        vector: usize,
        value: f64,
    },
    #[error("x*_{functional}(x_{vector}) = {value}, expected {expected}")]
    NotBiorthogonal {
        functional: usize,
        vector: usize,
        value: f64,
        expected: f64,
    },
    #[error("‖x_{index}‖·‖x*_{index}‖ = {product} exceeds the bound {bound}")]
    BoundExceeded { index: usize, product: f64, bound: f64 },
    #[error("system has {vectors} vectors but {functionals} functionals")]
    SizeMismatch { vectors: usize, functionals: usize },
    #[error("vector {0} of the system is zero")]
    ZeroVector(usize),
    #[error("scale factor must be positive, got {0}")]
    BadScale(f64),
    #[error("point {index} has norm {norm} > 1")]
    OutsideUnitBall { index: usize, norm: f64 },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("determinant ascent stagnated at |det| = {best_det}; Auerbach defect {defect:e}")]
    Stagnated { best_det: f64, defect: f64, best: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RescaleMode {
    ScaleFunctionals,
    ScalePoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub functional: Vec<f64>,
    /// `f(x_j) − f(x_i)`
    pub margin: f64,
    /// `min_z f(z) − f(x_i)`
    pub lower_slack: f64,
    /// `f(x_j) − max_z f(z)`
    pub upper_slack: f64,
}

impl PairWitness {
    fn measure(points: &[Vec<f64>], i: usize, j: usize, functional: Vec<f64>) -> Self {
        let vals: Vec<f64> = points.iter().map(|p| dot(&functional, p)).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        PairWitness {
            i,
            j,
            margin: vals[j] - vals[i],
            lower_slack: lo - vals[i],
            upper_slack: vals[j] - hi,
            functional,
        }
    }

    pub fn min_slack(&self) -> f64 {
        self.lower_slack.min(self.upper_slack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipodalCertificate {
    pub points: Vec<Vec<f64>>,
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub pairs: Vec<PairWitness>,
}

/// Outcome of re-evaluating every inequality of a certificate from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub max_point_norm: f64,
    pub max_dual_norm: f64,
    pub min_margin: f64,
    pub min_slack: f64,
    pub tol: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl AntipodalCertificate {
    /// Builds a certificate from per-pair functionals, measuring margins and
    /// slacks. `c2` is taken as given; `d` is the smallest margin.
    pub fn from_functionals(
        spec: &NormSpec,
        points: &[Vec<f64>],
        functionals: Vec<((usize, usize), Vec<f64>)>,
        c2: f64,
    ) -> Result<Self, AntipodalError> {
        let pairs: Vec<PairWitness> = functionals
            .into_iter()
            .map(|((i, j), f)| PairWitness::measure(points, i, j, f))
            .collect();
        let mut c1 = 0.0_f64;
        for p in points {
            c1 = c1.max(norm_eval(spec, p)?);
        }
        let d = pairs.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
        Ok(AntipodalCertificate {
            points: points.to_vec(),
            c1,
            c2,
            d,
            pairs,
        })
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairWitness> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    /// `n × n` matrix of the smaller of the two slacks per pair (symmetric, zero diagonal).
    pub fn slack_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.points.len();
        let mut m = vec![vec![0.0; n]; n];
        for p in &self.pairs {
            m[p.i][p.j] = p.min_slack();
            m[p.j][p.i] = p.min_slack();
        }
        m
    }

    pub fn min_slack(&self) -> f64 {
        self.pairs.iter().map(PairWitness::min_slack).fold(f64::INFINITY, f64::min)
    }

    /// Re-evaluates every inequality under `spec` with tolerance `tol`.
    pub fn verify(&self, spec: &NormSpec, tol: f64) -> Result<CertificateCheck, AntipodalError> {
        let mut failures = Vec::new();
        let n = self.points.len();
        let mut max_point_norm = 0.0_f64;
        for (k, p) in self.points.iter().enumerate() {
            let v = norm_eval(spec, p)?;
            max_point_norm = max_point_norm.max(v);
            if v > self.c1 + tol {
                failures.push(format!("‖x_{k}‖ = {v} > c1 = {}", self.c1));
            }
        }
        let duals: Vec<f64> = self
            .pairs
            .par_iter()
            .map(|p| dual_norm_eval(spec, &p.functional))
            .collect::<Result<_, _>>()?;
        let max_dual_norm = duals.iter().copied().fold(0.0, f64::max);
        let mut min_margin = f64::INFINITY;
        let mut min_slack = f64::INFINITY;
        for (p, dn) in self.pairs.iter().zip(&duals) {
            if *dn > self.c2 + tol {
                failures.push(format!("‖f_({},{})‖_* = {dn} > c2 = {}", p.i, p.j, self.c2));
            }
            let fresh = PairWitness::measure(&self.points, p.i, p.j, p.functional.clone());
            min_margin = min_margin.min(fresh.margin);
            min_slack = min_slack.min(fresh.min_slack());
            if fresh.margin < self.d - tol {
                failures.push(format!("margin of ({},{}) is {} < d = {}", p.i, p.j, fresh.margin, self.d));
            }
            if fresh.min_slack() < -tol {
                failures.push(format!("slack of ({},{}) is {}", p.i, p.j, fresh.min_slack()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.pair(i, j).is_none() {
                    failures.push(format!("pair ({i},{j}) has no functional"));
                }
            }
        }
        if !(self.d > 0.0) {
            failures.push(format!("d = {} is not positive", self.d));
        }
        Ok(CertificateCheck {
            max_point_norm,
            max_dual_norm,
            min_margin,
            min_slack,
            tol,
            passed: failures.is_empty(),
            failures,
        })
    }

    /// Scaling functionals gives `(c1, λc2, λd)`; scaling points gives `(λc1, c2, λd)`.
    pub fn rescale(&self, lambda: f64, mode: RescaleMode) -> Result<Self, AntipodalError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(AntipodalError::BadScale(lambda));
        }
        let scale_pair = |p: &PairWitness, functional: Vec<f64>| PairWitness {
            i: p.i,
            j: p.j,
            functional,
            margin: p.margin * lambda,
            lower_slack: p.lower_slack * lambda,
            upper_slack: p.upper_slack * lambda,
        };
        Ok(match mode {
            RescaleMode::ScaleFunctionals => AntipodalCertificate {
                points: self.points.clone(),
                c1: self.c1,
                c2: self.c2 * lambda,
                d: self.d * lambda,
                pairs: self
                    .pairs
                    .iter()
                    .map(|p| scale_pair(p, crate::linalg::scale(&p.functional, lambda)))
                    .collect(),
            },
            RescaleMode::ScalePoints => AntipodalCertificate {
                points: self.points.iter().map(|x| crate::linalg::scale(x, lambda)).collect(),
                c1: self.c1 * lambda,
                c2: self.c2,
                d: self.d * lambda,
                pairs: self.pairs.iter().map(|p| scale_pair(p, p.functional.clone())).collect(),
            },
        })
    }
}

/// Pair for which no functional of dual norm `<= c2` separates with a positive margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub i: usize,
    pub j: usize,
    pub best_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AntipodalOutcome {
    Certified(AntipodalCertificate),
    NotAntipodal(FailureWitness),
}

impl AntipodalOutcome {
    pub fn certificate(&self) -> Option<&AntipodalCertificate> {
        match self {
            AntipodalOutcome::Certified(c) => Some(c),
            AntipodalOutcome::NotAntipodal(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, AntipodalOutcome::Certified(_))
    }
}

/// Largest margin `δ` for the pair `(i, j)` and a functional attaining it.
pub fn best_pair_functional(
    spec: &NormSpec,
    points: &[Vec<f64>],
    i: usize,
    j: usize,
    c2: f64,
) -> Result<(Vec<f64>, f64), AntipodalError> {
    let n = points[0].len();
    let mut b = ProgramBuilder::new();
    let f = b.vars(n);
    let delta = b.var();
    let fx = Affine::combination(&points[i], &f);
    let fy = Affine::combination(&points[j], &f);
    for (k, z) in points.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let fz = Affine::combination(z, &f);
        b.le(&fx, &fz);
        b.le(&fz, &fy);
    }
    b.le(&delta, &fy.minus(&fx));
    encode_dual(spec, &mut b, &f, &Affine::constant(c2))?;
    let sol = b.maximize(&delta)?;
    let functional = sol.eval_all(&f);
    let margin = dot(&functional, &points[j]) - dot(&functional, &points[i]);
    Ok((functional, margin))
}

/// Maximises the margin for every pair; fails on the first pair (in index
/// order) whose best margin is at most [`MIN_MARGIN`].
pub fn certify_antipodal(spec: &NormSpec, s: &PointSet, c2: f64) -> Result<AntipodalOutcome, AntipodalError> {
    s.validate()?;
    if s.len() < 2 {
        return Err(AntipodalError::TooFewPoints(s.len()));
    }
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(AntipodalError::BadDualBound(c2));
    }
    spec.check_dim(&s.points[0])?;
    let results: Vec<((usize, usize), Result<(Vec<f64>, f64), AntipodalError>)> = s
        .pairs()
        .into_par_iter()
        .map(|(i, j)| ((i, j), best_pair_functional(spec, &s.points, i, j, c2)))
        .collect();
    let mut functionals = Vec::with_capacity(results.len());
    for ((i, j), r) in results {
        let (f, margin) = r?;
        if margin <= MIN_MARGIN {
            return Ok(AntipodalOutcome::NotAntipodal(FailureWitness {
                i,
                j,
                best_margin: margin.max(0.0),
            }));
        }
        functionals.push(((i, j), f));
    }
    Ok(AntipodalOutcome::Certified(AntipodalCertificate::from_functionals(
        spec,
        &s.points,
        functionals,
        c2,
    )?))
}

/// Smallest over pairs of the largest margin achievable with `c2 = 1`, or
/// zero if some pair cannot be separated. A finite lower bound for
/// antipodality constants of sets in the unit ball.
pub fn separation_margin(spec: &NormSpec, s: &PointSet) -> Result<f64, AntipodalError> {
    s.validate()?;
    for (index, p) in s.points.iter().enumerate() {
        let norm = norm_eval(spec, p)?;
        if norm > 1.0 + 1e-9 {
            return Err(AntipodalError::OutsideUnitBall { index, norm });
        }
    }
    Ok(match certify_antipodal(spec, s, 1.0)? {
        AntipodalOutcome::Certified(c) => c.d,
        AntipodalOutcome::NotAntipodal(_) => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_in_sup_norm() {
        let s = PointSet::cube_vertices(2);
        let out = certify_antipodal(&NormSpec::linf(), &s, 1.0).unwrap();
        let cert = out.certificate().unwrap();
        assert!((cert.d - 2.0).abs() < 1e-12);
        assert_eq!(cert.c1, 1.0);
        assert!(cert.verify(&NormSpec::linf(), 1e-9).unwrap().passed);
    }

    #[test]
    fn collinear_points_fail_on_first_pair() {
        let s = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let out = certify_antipodal(&NormSpec::l2(), &s, 1.0).unwrap();
        assert_eq!(
            out,
            AntipodalOutcome::NotAntipodal(FailureWitness { i: 0, j: 1, best_margin: 0.0 })
        );
    }

    #[test]
    fn euclidean_basis_margin() {
        let s = PointSet::standard_basis(3);
        let out = certify_antipodal(&NormSpec::l2(), &s, 1.0).unwrap();
        let cert = out.certificate().unwrap();
        assert!((cert.d - 2f64.sqrt()).abs() < 1e-8, "{}", cert.d);
        let f = &cert.pair(0, 1).unwrap().functional;
        let expected = [-1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0];
        for (a, b) in f.iter().zip(expected) {
            assert!((a - b).abs() < 1e-5, "{f:?}");
        }
    }

    #[test]
    fn rescale_round_trip() {
        let s = PointSet::cube_vertices(2);
        let cert = certify_antipodal(&NormSpec::linf(), &s, 1.0).unwrap();
        let cert = cert.certificate().unwrap();
        for mode in [RescaleMode::ScaleFunctionals, RescaleMode::ScalePoints] {
            let back = cert.rescale(3.7, mode).unwrap().rescale(1.0 / 3.7, mode).unwrap();
            assert!((back.c1 - cert.c1).abs() < 1e-12);
            assert!((back.c2 - cert.c2).abs() < 1e-12);
            assert!((back.d - cert.d).abs() < 1e-12);
        }
        let half = cert.rescale(0.5, RescaleMode::ScalePoints).unwrap();
        assert_eq!((half.c1, half.c2, half.d), (0.5, 1.0, 1.0));
        assert!(half.verify(&NormSpec::linf(), 1e-9).unwrap().passed);
        assert_eq!(cert.rescale(0.0, RescaleMode::ScalePoints), Err(AntipodalError::BadScale(0.0)));
    }

    #[test]
    fn separation_margin_examples() {
        let m = separation_margin(&NormSpec::linf(), &PointSet::cube_vertices(2)).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
        let m = separation_margin(&NormSpec::l2(), &PointSet::standard_basis(3)).unwrap();
        assert!((m - 2f64.sqrt()).abs() < 1e-8);
        let line = PointSet::new(vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(separation_margin(&NormSpec::l2(), &line).unwrap(), 0.0);
        assert!(matches!(
            separation_margin(&NormSpec::l2(), &PointSet::cube_vertices(2)),
            Err(AntipodalError::OutsideUnitBall { index: 0, .. })
        ));
    }
}
