//! `|||x||| = max{ ‖x‖/(1+eps), sup_{|F|=m} model(x restricted to F) }`.

use super::{eval_inner, NormError, NormSpec};

const MAX_SUPPORTS: usize = 200_000;

/// Models whose value depends only on the multiset of `|x_k|` and grows
/// with each of them, so the best support is the `m` largest coordinates.
fn is_symmetric(model: &NormSpec) -> bool {
    match model {
        NormSpec::Lp { .. } => true,
        NormSpec::Scaled { base, .. } => is_symmetric(base),
        NormSpec::MaxOf { norms } => norms.iter().all(is_symmetric),
        _ => false,
    }
}

/// All `m`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, m: usize) -> Result<Vec<Vec<usize>>, NormError> {
    if m > n {
        return Err(NormError::OrderTooLarge { m, dim: n });
    }
    let count = (0..m).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    if count > MAX_SUPPORTS as u128 {
        return Err(NormError::Invalid {
            variant: "SpreadingComposite",
            reason: format!("{count} supports of size {m} in dimension {n} is too many to enumerate"),
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..m).rev().find(|&i| idx[i] < n - m + i) else {
            return Ok(out);
        };
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn mask(v: &[f64], support: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for &k in support {
        out[k] = v[k];
    }
    out
}

/// Value of the composite norm and a support attaining the inner sup.
pub(crate) fn eval(
    base: &NormSpec,
    model: &NormSpec,
    m: usize,
    eps: f64,
    exhaustive: bool,
    v: &[f64],
) -> Result<(f64, Vec<usize>), NormError> {
    let n = v.len();
    if m > n {
        return Err(NormError::OrderTooLarge { m, dim: n });
    }
    let (sup, support) = if is_symmetric(model) {
        let mut order: Vec<usize> = (0..n).collect();
        // stable: ties keep the lower index first
        order.sort_by(|&a, &b| v[b].abs().partial_cmp(&v[a].abs()).unwrap());
        let mut support = order[..m].to_vec();
        support.sort_unstable();
        (eval_inner(model, &mask(v, &support))?, support)
    } else if exhaustive {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for s in subsets(n, m)? {
            let val = eval_inner(model, &mask(v, &s))?;
            if val > best.0 {
                best = (val, s);
            }
        }
        best
    } else {
        return Err(NormError::NonSymmetricModel);
    };
    Ok(((eval_inner(base, v)? / (1.0 + eps)).max(sup), support))
}

/// Evaluates a `SpreadingComposite` spec at the coefficient vector `alpha`.
pub fn spreading_composite_norm(spec: &NormSpec, alpha: &[f64]) -> Result<f64, NormError> {
    let NormSpec::SpreadingComposite {
        base,
        model,
        m,
        eps,
        exhaustive,
    } = spec
    else {
        return Err(NormError::Invalid {
            variant: spec.variant_name(),
            reason: "expected a SpreadingComposite spec".into(),
        });
    };
    spec.check_dim(alpha)?;
    Ok(eval(base, model, *m, *eps, *exhaustive, alpha)?.0)
}
