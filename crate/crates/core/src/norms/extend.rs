//! Extension of a norm on a subspace `Z` to the whole space.
//!
//! Each functional `f` of the dual unit sphere of `(Z, z_norm)` is extended
//! to `f̃` on `R^n` with the smallest possible ambient dual norm; the
//! extension is `max{ sup_f |f̃(x)|, ambient(x) / c2 }`.

use std::f64::consts::PI;

use super::{dual_inner, encode_dual, support_inner, NormError, NormSpec};
use crate::convex::{minimize_convex_with, ConvexOptions};
use crate::linalg::{self, dot};
use crate::program::{Affine, ProgramBuilder};
use crate::sampling;

/// Size of the sampled dual sphere when `z_norm` is not polyhedral.
pub const EXTENSION_SAMPLE_DIRECTIONS: usize = 512;

const SAMPLE_SEED: u64 = 0x5eed;

/// Extreme points (up to sign) of the dual ball of `z_norm` on `R^k`, when
/// the ball is a polytope with a known facet description.
fn dual_extreme_points(z_norm: &NormSpec, k: usize) -> Option<Vec<Vec<f64>>> {
    match z_norm {
        NormSpec::Polyhedral { facets } => Some(facets.clone()),
        NormSpec::Lp { p } if p.is_infinite() => Some((0..k).map(|i| linalg::unit(k, i)).collect()),
        NormSpec::Lp { p } if p.0 == 1.0 && k <= 16 => Some(
            (0..1usize << (k - 1))
                .map(|mask| {
                    (0..k)
                        .map(|j| if j > 0 && (mask >> (j - 1)) & 1 == 1 { -1.0 } else { 1.0 })
                        .collect()
                })
                .collect(),
        ),
        NormSpec::Scaled { factor, base } => {
            dual_extreme_points(base, k).map(|pts| pts.iter().map(|p| linalg::scale(p, *factor)).collect())
        }
        _ => None,
    }
}

/// Deterministic directions on the sphere of `R^k`, normalised to the dual
/// unit sphere of `z_norm`.
fn sampled_dual_sphere(z_norm: &NormSpec, k: usize) -> Result<Vec<Vec<f64>>, NormError> {
    let raw: Vec<Vec<f64>> = match k {
        1 => vec![vec![1.0]],
        2 => (0..EXTENSION_SAMPLE_DIRECTIONS)
            .map(|j| {
                let a = PI * j as f64 / EXTENSION_SAMPLE_DIRECTIONS as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => sampling::directions(k, EXTENSION_SAMPLE_DIRECTIONS, SAMPLE_SEED),
    };
    raw.iter()
        .map(|phi| Ok(linalg::scale(phi, 1.0 / dual_inner(z_norm, phi)?)))
        .collect()
}

/// Smallest ambient-dual-norm `g` with `g·b_i = phi_i` for every basis vector.
fn minimal_extension(ambient: &NormSpec, basis: &[Vec<f64>], phi: &[f64]) -> Result<Vec<f64>, NormError> {
    let n = basis[0].len();
    let mut b = ProgramBuilder::new();
    let g = b.vars(n);
    let t = b.var();
    match encode_dual(ambient, &mut b, &g, &t) {
        Ok(()) => {
            for (bi, &p) in basis.iter().zip(phi) {
                b.eq(&Affine::combination(bi, &g), &Affine::constant(p));
            }
            let sol = b.minimize(&t)?;
            Ok(sol.eval_all(&g))
        }
        Err(NormError::Unsupported { .. }) => {
            // g = g0 + N u with g0 the least-squares solution and N spanning
            // the annihilator of Z.
            let bt = linalg::rows(basis, n);
            let g0 = linalg::lstsq(&bt, phi);
            let ns = linalg::null_space(&bt, n, 1e-12);
            if ns.ncols() == 0 {
                return Ok(g0);
            }
            let lift = |u: &[f64]| {
                let mut g = g0.clone();
                for (j, uj) in u.iter().enumerate() {
                    for r in 0..n {
                        g[r] += uj * ns[(r, j)];
                    }
                }
                g
            };
            let f = |u: &[f64]| {
                let g = lift(u);
                let val = dual_inner(ambient, &g).unwrap_or(f64::NAN);
                let x = support_inner(ambient, &g).unwrap_or_else(|_| vec![0.0; n]);
                let grad = (0..ns.ncols())
                    .map(|j| (0..n).map(|r| ns[(r, j)] * x[r]).sum())
                    .collect();
                (val, grad)
            };
            let res = minimize_convex_with(f, &vec![0.0; ns.ncols()], &ConvexOptions::with_tol(1e-11))?;
            Ok(lift(&res.x))
        }
        Err(e) => Err(e),
    }
}

pub fn extend_norm(
    ambient_dim: usize,
    z_basis: &[Vec<f64>],
    z_norm: &NormSpec,
    ambient: &NormSpec,
    c2: f64,
) -> Result<NormSpec, NormError> {
    let k = z_basis.len();
    if k == 0 {
        return Err(NormError::DependentBasis);
    }
    for b in z_basis {
        if b.len() != ambient_dim {
            return Err(NormError::DimensionMismatch {
                expected: ambient_dim,
                found: b.len(),
            });
        }
    }
    if linalg::rank(&linalg::columns(z_basis), 1e-10) < k {
        return Err(NormError::DependentBasis);
    }
    z_norm.validate()?;
    ambient.validate()?;
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(NormError::Invalid {
            variant: "SubspaceExtension",
            reason: format!("c2 must be positive, got {c2}"),
        });
    }
    if let Some(d) = z_norm.dim() {
        if d != k {
            return Err(NormError::DimensionMismatch { expected: k, found: d });
        }
    }
    if let Some(d) = ambient.dim() {
        if d != ambient_dim {
            return Err(NormError::DimensionMismatch {
                expected: ambient_dim,
                found: d,
            });
        }
    }

    let embed = |a: &[f64]| {
        let mut z = vec![0.0; ambient_dim];
        for (bi, ai) in z_basis.iter().zip(a) {
            linalg::axpy(&mut z, *ai, bi);
        }
        z
    };

    // ‖z‖ <= c2·|||z||| on the basis and on sampled coordinate directions.
    let mut probes: Vec<Vec<f64>> = (0..k).map(|i| linalg::unit(k, i)).collect();
    probes.extend(sampling::directions(k, 1000, SAMPLE_SEED ^ 1));
    for a in &probes {
        let z = embed(a);
        let amb = super::eval_inner(ambient, &z)?;
        let bound = c2 * super::eval_inner(z_norm, a)?;
        if amb > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(NormError::SandwichViolated {
                sample: z,
                ambient: amb,
                bound,
            });
        }
    }

    let sphere = match dual_extreme_points(z_norm, k) {
        Some(points) => points,
        None => sampled_dual_sphere(z_norm, k)?,
    };
    let functionals = sphere
        .iter()
        .map(|phi| minimal_extension(ambient, z_basis, phi))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert!(functionals
        .iter()
        .zip(&sphere)
        .all(|(g, phi)| z_basis.iter().zip(phi).all(|(b, p)| (dot(g, b) - p).abs() < 1e-6)));

    Ok(NormSpec::SubspaceExtension {
        basis: z_basis.to_vec(),
        functionals,
        ambient: Box::new(ambient.clone()),
        c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_in_the_plane() {
        let ext = extend_norm(
            2,
            &[vec![1.0, 0.0]],
            &NormSpec::scaled(2.0, NormSpec::l1()),
            &NormSpec::l2(),
            0.5,
        )
        .unwrap();
        assert!((ext.eval(&[1.0, 0.0]).unwrap() - 2.0).abs() < 1e-9);
        assert!((ext.eval(&[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-9);
        let NormSpec::SubspaceExtension { functionals, .. } = &ext else { unreachable!() };
        assert!(functionals[0][1].abs() < 1e-7, "{functionals:?}");
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let r = extend_norm(2, &[vec![1.0, 1.0], vec![2.0, 2.0]], &NormSpec::l2(), &NormSpec::l2(), 1.0);
        assert_eq!(r, Err(NormError::DependentBasis));
    }

    #[test]
    fn sandwich_violation_is_reported() {
        let r = extend_norm(2, &[vec![1.0, 0.0]], &NormSpec::l2(), &NormSpec::l2(), 0.5);
        assert!(matches!(r, Err(NormError::SandwichViolated { .. })));
    }

    #[test]
    fn general_exponent_ambient_extends_exactly_on_z() {
        let basis = vec![vec![1.0, 1.0, 0.0]];
        let amb = NormSpec::lp(3.0);
        let ext = extend_norm(3, &basis, &NormSpec::scaled(2.0, NormSpec::l2()), &amb, 1.0).unwrap();
        assert!((ext.eval(&[0.5, 0.5, 0.0]).unwrap() - 1.0).abs() < 1e-6);
    }
}
