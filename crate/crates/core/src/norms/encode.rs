//! Program encodings `N(x) <= t` and `N*(g) <= t` for every variant.

use super::spreading::subsets;
use super::{NormError, NormSpec};
use crate::program::{Affine, ProgramBuilder};

/// True when the unit ball is a polytope and every encoding stays linear.
pub(crate) fn is_polyhedral(spec: &NormSpec) -> bool {
    match spec {
        NormSpec::Lp { p } => p.0 == 1.0 || p.is_infinite(),
        NormSpec::Polyhedral { .. } => true,
        NormSpec::Scaled { base, .. } => is_polyhedral(base),
        NormSpec::MaxOf { norms } => norms.iter().all(is_polyhedral),
        NormSpec::HullGauge { ambient, .. } => is_polyhedral(ambient),
        NormSpec::SubspaceExtension { ambient, .. } => is_polyhedral(ambient),
        NormSpec::SpreadingComposite { base, model, .. } => is_polyhedral(base) && is_polyhedral(model),
    }
}

fn lin(coeffs: &[f64], x: &[Affine]) -> Affine {
    Affine::combination(coeffs, x)
}

fn sum(xs: &[Affine]) -> Affine {
    xs.iter().fold(Affine::zero(), |acc, e| acc.plus(e))
}

fn encode_lp(p: f64, b: &mut ProgramBuilder, x: &[Affine], t: &Affine) -> Result<(), NormError> {
    if p.is_infinite() {
        for xi in x {
            b.abs_le(xi, t);
        }
    } else if p == 1.0 {
        let a = b.vars(x.len());
        for (xi, ai) in x.iter().zip(&a) {
            b.abs_le(xi, ai);
        }
        b.le(&sum(&a), t);
    } else if p == 2.0 {
        b.soc(x.to_vec(), t.clone());
    } else {
        return Err(NormError::Unsupported {
            variant: "Lp",
            operation: "program encoding for p outside {1, 2, inf}",
        });
    }
    Ok(())
}

pub(crate) fn encode_norm(
    spec: &NormSpec,
    b: &mut ProgramBuilder,
    x: &[Affine],
    t: &Affine,
) -> Result<(), NormError> {
    match spec {
        NormSpec::Lp { p } => encode_lp(p.0, b, x, t)?,
        NormSpec::Polyhedral { facets } => {
            for f in facets {
                b.abs_le(&lin(f, x), t);
            }
        }
        NormSpec::Scaled { factor, base } => encode_norm(base, b, x, &t.scaled(1.0 / factor))?,
        NormSpec::MaxOf { norms } => {
            for n in norms {
                encode_norm(n, b, x, t)?;
            }
        }
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => {
            let tau = b.vars(generators.len());
            let a = b.vars(generators.len());
            for (ti, ai) in tau.iter().zip(&a) {
                b.abs_le(ti, ai);
            }
            let r: Vec<Affine> = (0..x.len())
                .map(|k| {
                    let mut e = x[k].clone();
                    for (w, ti) in generators.iter().zip(&tau) {
                        e = e.minus(&ti.scaled(w[k]));
                    }
                    e
                })
                .collect();
            let s = b.var();
            encode_norm(ambient, b, &r, &s)?;
            b.le(&s.scaled(1.0 / rho).plus(&sum(&a)), t);
        }
        NormSpec::SubspaceExtension {
            functionals,
            ambient,
            c2,
            ..
        } => {
            for f in functionals {
                b.abs_le(&lin(f, x), t);
            }
            encode_norm(ambient, b, x, &t.scaled(*c2))?;
        }
        NormSpec::SpreadingComposite {
            base,
            model,
            m,
            eps,
            ..
        } => {
            encode_norm(base, b, x, &t.scaled(1.0 + eps))?;
            for support in subsets(x.len(), *m)? {
                let masked: Vec<Affine> = (0..x.len())
                    .map(|k| {
                        if support.contains(&k) {
                            x[k].clone()
                        } else {
                            Affine::zero()
                        }
                    })
                    .collect();
                encode_norm(model, b, &masked, t)?;
            }
        }
    }
    Ok(())
}

/// Adds `N*(g) <= t`, where `N*` is the dual norm.
pub(crate) fn encode_dual(
    spec: &NormSpec,
    b: &mut ProgramBuilder,
    g: &[Affine],
    t: &Affine,
) -> Result<(), NormError> {
    let n = g.len();
    match spec {
        NormSpec::Lp { p } => encode_lp(p.conjugate().0, b, g, t)?,
        NormSpec::Polyhedral { facets } => {
            // g = Σ λ_i f_i with Σ|λ_i| <= t
            let lambda = b.vars(facets.len());
            let mu = b.vars(facets.len());
            for (l, m) in lambda.iter().zip(&mu) {
                b.abs_le(l, m);
            }
            for k in 0..n {
                let col: Vec<f64> = facets.iter().map(|f| f[k]).collect();
                b.eq(&lin(&col, &lambda), &g[k]);
            }
            b.le(&sum(&mu), t);
        }
        NormSpec::Scaled { factor, base } => encode_dual(base, b, g, &t.scaled(*factor))?,
        NormSpec::MaxOf { norms } => {
            let parts: Vec<Vec<Affine>> = norms.iter().map(|_| b.vars(n)).collect();
            let ts = b.vars(norms.len());
            for k in 0..n {
                let total = sum(&parts.iter().map(|p| p[k].clone()).collect::<Vec<_>>());
                b.eq(&total, &g[k]);
            }
            for ((norm, part), ti) in norms.iter().zip(&parts).zip(&ts) {
                encode_dual(norm, b, part, ti)?;
            }
            b.le(&sum(&ts), t);
        }
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => {
            encode_dual(ambient, b, g, &t.scaled(1.0 / rho))?;
            for w in generators {
                b.abs_le(&lin(w, g), t);
            }
        }
        NormSpec::SubspaceExtension {
            functionals,
            ambient,
            c2,
            ..
        } => {
            // g = Σ λ_i f_i + h with Σ|λ_i| + c2·ambient*(h) <= t
            let lambda = b.vars(functionals.len());
            let mu = b.vars(functionals.len());
            for (l, m) in lambda.iter().zip(&mu) {
                b.abs_le(l, m);
            }
            let h = b.vars(n);
            for k in 0..n {
                let col: Vec<f64> = functionals.iter().map(|f| f[k]).collect();
                b.eq(&lin(&col, &lambda).plus(&h[k]), &g[k]);
            }
            let s = b.var();
            encode_dual(ambient, b, &h, &s)?;
            b.le(&sum(&mu).plus(&s.scaled(*c2)), t);
        }
        NormSpec::SpreadingComposite {
            base,
            model,
            m,
            eps,
            ..
        } => {
            // Support function of an intersection is the infimal convolution
            // of the support functions.
            let h0 = b.vars(n);
            let s0 = b.var();
            encode_dual(base, b, &h0, &s0)?;
            let mut total_t = s0.scaled(1.0 + eps);
            let mut total_g: Vec<Affine> = h0;
            for support in subsets(n, *m)? {
                let u = b.vars(n);
                let tf = b.var();
                encode_dual(model, b, &u, &tf)?;
                // Only the coordinates in the support reach g.
                for k in 0..n {
                    if support.contains(&k) {
                        total_g[k] = total_g[k].plus(&u[k]);
                    }
                }
                total_t = total_t.plus(&tf);
            }
            for k in 0..n {
                b.eq(&total_g[k], &g[k]);
            }
            b.le(&total_t, t);
        }
    }
    Ok(())
}

/// Residual `x - Σ t_i w_i` as affine expressions, for callers that fix `x`.
pub(crate) fn hull_residual(v: &[f64], generators: &[Vec<f64>], tau: &[Affine]) -> Vec<Affine> {
    (0..v.len())
        .map(|k| {
            let coeffs: Vec<f64> = generators.iter().map(|w| -w[k]).collect();
            lin(&coeffs, tau).add_constant(v[k])
        })
        .collect()
}
