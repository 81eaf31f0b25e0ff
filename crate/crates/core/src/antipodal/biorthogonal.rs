use serde::{Deserialize, Serialize};

use super::{AntipodalCertificate, AntipodalError};
use crate::linalg::{self, dot};
use crate::norms::{dual_norm_eval, norm_eval, DualFunctional, NormSpec};

const BIORTHOGONAL_TOL: f64 = 1e-9;

/// Pairs `(x_γ, x*_γ)` with `x*_β(x_α) = δ_αβ` and `‖x_γ‖·‖x*_γ‖ <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiorthogonalSystem {
    pub vectors: Vec<Vec<f64>>,
    pub functionals: Vec<DualFunctional>,
    pub bound: f64,
}

impl BiorthogonalSystem {
    /// Builds a system from vectors and functional coefficients, recording
    /// the dual norms under `spec` and the smallest valid `bound`.
    pub fn new(spec: &NormSpec, vectors: Vec<Vec<f64>>, functionals: Vec<Vec<f64>>) -> Result<Self, AntipodalError> {
        if vectors.len() != functionals.len() {
            return Err(AntipodalError::SizeMismatch {
                vectors: vectors.len(),
                functionals: functionals.len(),
            });
        }
        let mut bound = 0.0_f64;
        let mut fs = Vec::with_capacity(functionals.len());
        for (x, f) in vectors.iter().zip(functionals) {
            let dn = dual_norm_eval(spec, &f)?;
            bound = bound.max(norm_eval(spec, x)? * dn);
            fs.push(DualFunctional::new(f, dn));
        }
        Ok(BiorthogonalSystem {
            vectors,
            functionals: fs,
            bound,
        })
    }

    /// Standard basis with coordinate functionals.
    pub fn standard(spec: &NormSpec, n: usize) -> Result<Self, AntipodalError> {
        let e: Vec<Vec<f64>> = (0..n).map(|i| linalg::unit(n, i)).collect();
        Self::new(spec, e.clone(), e)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `0 <= x*_β(x_α) <= 1` for all pairs; reports the first violation.
    pub fn check_chain(&self) -> Result<(), AntipodalError> {
        for (beta, f) in self.functionals.iter().enumerate() {
            for (alpha, x) in self.vectors.iter().enumerate() {
                let value = f.apply(x);
                if !(-BIORTHOGONAL_TOL..=1.0 + BIORTHOGONAL_TOL).contains(&value) {
                    return Err(AntipodalError::ChainViolated {
                        functional: beta,
                        vector: alpha,
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    /// Biorthogonality and the norm-product bound under `spec`.
    pub fn validate(&self, spec: &NormSpec) -> Result<(), AntipodalError> {
        if self.vectors.len() != self.functionals.len() {
            return Err(AntipodalError::SizeMismatch {
                vectors: self.vectors.len(),
                functionals: self.functionals.len(),
            });
        }
        for (beta, f) in self.functionals.iter().enumerate() {
            for (alpha, x) in self.vectors.iter().enumerate() {
                let value = f.apply(x);
                let expected = if alpha == beta { 1.0 } else { 0.0 };
                if (value - expected).abs() > BIORTHOGONAL_TOL {
                    return Err(AntipodalError::NotBiorthogonal {
                        functional: beta,
                        vector: alpha,
                        value,
                        expected,
                    });
                }
            }
        }
        for (index, (x, f)) in self.vectors.iter().zip(&self.functionals).enumerate() {
            let product = norm_eval(spec, x)? * dual_norm_eval(spec, &f.coeffs)?;
            if product > self.bound * (1.0 + 1e-9) + 1e-9 {
                return Err(AntipodalError::BoundExceeded {
                    index,
                    product,
                    bound: self.bound,
                });
            }
        }
        Ok(())
    }
}

/// Certificate for the vectors of a biorthogonal system: the pair
/// `(x_i, x_j)` is separated by `x*_j`, with margin 1.
pub fn antipodal_from_biorthogonal(
    spec: &NormSpec,
    sys: &BiorthogonalSystem,
) -> Result<AntipodalCertificate, AntipodalError> {
    sys.check_chain()?;
    sys.validate(spec)?;
    let n = sys.len();
    if n < 2 {
        return Err(AntipodalError::TooFewPoints(n));
    }
    let mut c2 = 0.0_f64;
    for f in &sys.functionals {
        c2 = c2.max(dual_norm_eval(spec, &f.coeffs)?);
    }
    let functionals = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| ((i, j), sys.functionals[j].coeffs.clone()))
        .collect();
    AntipodalCertificate::from_functionals(spec, &sys.vectors, functionals, c2)
}

/// `y = x/‖x‖`, `y* = ‖x‖·x*`.
pub fn normalize_biorthogonal(spec: &NormSpec, sys: &BiorthogonalSystem) -> Result<BiorthogonalSystem, AntipodalError> {
    let mut vectors = Vec::with_capacity(sys.len());
    let mut functionals = Vec::with_capacity(sys.len());
    for (k, (x, f)) in sys.vectors.iter().zip(&sys.functionals).enumerate() {
        let r = norm_eval(spec, x)?;
        if r == 0.0 {
            return Err(AntipodalError::ZeroVector(k));
        }
        vectors.push(linalg::scale(x, 1.0 / r));
        let coeffs = linalg::scale(&f.coeffs, r);
        let dn = dual_norm_eval(spec, &coeffs)?;
        functionals.push(DualFunctional::new(coeffs, dn));
    }
    debug_assert!(vectors
        .iter()
        .zip(&functionals)
        .all(|(y, g)| (dot(&g.coeffs, y) - 1.0).abs() < 1e-9));
    Ok(BiorthogonalSystem {
        vectors,
        functionals,
        bound: sys.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_basis_certificate() {
        let spec = NormSpec::l2();
        let sys = BiorthogonalSystem::standard(&spec, 3).unwrap();
        let cert = antipodal_from_biorthogonal(&spec, &sys).unwrap();
        assert_eq!((cert.c1, cert.c2, cert.d), (1.0, 1.0, 1.0));
        assert!(cert.verify(&spec, 1e-12).unwrap().passed);
    }

    #[test]
    fn chain_violation_names_the_pair() {
        let spec = NormSpec::l2();
        let sys = BiorthogonalSystem::new(
            &spec,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, -0.5], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(
            antipodal_from_biorthogonal(&spec, &sys),
            Err(AntipodalError::ChainViolated { functional: 0, vector: 1, value: -0.5 })
        );
    }

    #[test]
    fn normalization_cancels_scaling() {
        let spec = NormSpec::l2();
        let sys = BiorthogonalSystem::new(&spec, vec![vec![2.0]], vec![vec![0.5]]).unwrap();
        assert_eq!(sys.bound, 1.0);
        let y = normalize_biorthogonal(&spec, &sys).unwrap();
        assert_eq!(y.vectors, vec![vec![1.0]]);
        assert_eq!(y.functionals[0].coeffs, vec![1.0]);
        let again = normalize_biorthogonal(&spec, &y).unwrap();
        assert_eq!(again, y);
    }
}
