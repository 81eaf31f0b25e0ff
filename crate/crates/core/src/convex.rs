//! First-order minimisation of convex, possibly non-smooth functions.
//!
//! Subgradient descent (Polyak steps when a lower bound on the optimum is
//! known, diminishing normalised steps otherwise) followed by a polish of
//! exact one-dimensional searches along the coordinate axes and the last
//! subgradient direction. The polish is what delivers accuracy; the
//! subgradient phase only has to land in the right basin.

use thiserror::Error;

use crate::linalg::{axpy, euclid, max_abs};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvexError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("starting point is empty")]
    EmptyStart,
    #[error("function returned a subgradient of length {found}, expected {expected}")]
    SubgradientLength { found: usize, expected: usize },
    #[error("iterates diverged (|x| = {0:e}); function is probably not coercive")]
    Diverged(f64),
    #[error("function value is not finite at an iterate")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Known lower bound on the infimum; enables Polyak steps.
    pub lower_bound: Option<f64>,
    pub initial_step: f64,
    pub polish_sweeps: usize,
}

impl ConvexOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for ConvexOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 2000,
            lower_bound: None,
            initial_step: 1.0,
            polish_sweeps: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Best value seen after each iteration; non-increasing.
    pub history: Vec<f64>,
}

pub fn minimize_convex<F>(f: F, x0: &[f64], tol: f64) -> Result<ConvexResult, ConvexError>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    minimize_convex_with(f, x0, &ConvexOptions::with_tol(tol))
}

pub fn minimize_convex_with<F>(
    f: F,
    x0: &[f64],
    opts: &ConvexOptions,
) -> Result<ConvexResult, ConvexError>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    if !(opts.tol > 0.0) {
        return Err(ConvexError::BadTolerance(opts.tol));
    }
    if x0.is_empty() {
        return Err(ConvexError::EmptyStart);
    }
    let k = x0.len();
    let guard = 1e8 * (1.0 + max_abs(x0));
    let eval = |x: &[f64]| -> Result<(f64, Vec<f64>), ConvexError> {
        let (v, g) = f(x);
        if !v.is_finite() {
            return Err(ConvexError::NonFinite);
        }
        if g.len() != k {
            return Err(ConvexError::SubgradientLength {
                found: g.len(),
                expected: k,
            });
        }
        Ok((v, g))
    };

    let mut x = x0.to_vec();
    let (mut best_v, mut last_g) = eval(&x)?;
    let mut best_x = x.clone();
    let mut history = vec![best_v];

    for it in 0..opts.max_iter {
        let (v, g) = eval(&x)?;
        if v < best_v {
            best_v = v;
            best_x = x.clone();
        }
        history.push(best_v);
        let gn = euclid(&g);
        if gn == 0.0 {
            break;
        }
        last_g = g.clone();
        let step = match opts.lower_bound {
            Some(lb) => ((v - lb).max(0.0) / (gn * gn)).min(opts.initial_step * 1e3 / gn),
            None => opts.initial_step / ((it + 1) as f64).sqrt() / gn,
        };
        if step == 0.0 {
            break;
        }
        axpy(&mut x, -step, &g);
        let nx = max_abs(&x);
        if !nx.is_finite() || nx > guard {
            return Err(ConvexError::Diverged(nx));
        }
    }

    // Polish with exact line searches.
    let phi = |x: &[f64]| eval(x).map(|(v, _)| v);
    let mut x = best_x;
    let mut v = best_v;
    let mut dirs: Vec<Vec<f64>> = (0..k).map(|i| crate::linalg::unit(k, i)).collect();
    let gn = euclid(&last_g);
    if gn > 0.0 {
        dirs.push(last_g.iter().map(|g| g / gn).collect());
    }
    for _ in 0..opts.polish_sweeps {
        let before = v;
        for d in &dirs {
            let (s, nv) = line_min(&phi, &x, d, v, opts.tol)?;
            if nv < v {
                axpy(&mut x, s, d);
                v = nv;
            }
        }
        // Refresh the subgradient direction from the current point.
        let (_, g) = eval(&x)?;
        let gn = euclid(&g);
        if gn > 0.0 {
            let d: Vec<f64> = g.iter().map(|gi| gi / gn).collect();
            let (s, nv) = line_min(&phi, &x, &d, v, opts.tol)?;
            if nv < v {
                axpy(&mut x, s, &d);
                v = nv;
            }
        }
        history.push(v);
        if max_abs(&x) > guard {
            return Err(ConvexError::Diverged(max_abs(&x)));
        }
        if before - v <= opts.tol * 1e-3 {
            break;
        }
    }

    Ok(ConvexResult {
        x,
        value: v,
        history,
    })
}

/// Exact minimisation of the convex restriction `s ↦ φ(x + s d)`.
fn line_min<P>(phi: &P, x: &[f64], d: &[f64], v0: f64, tol: f64) -> Result<(f64, f64), ConvexError>
where
    P: Fn(&[f64]) -> Result<f64, ConvexError>,
{
    let at = |s: f64| -> Result<f64, ConvexError> {
        let mut y = x.to_vec();
        axpy(&mut y, s, d);
        phi(&y)
    };
    let mut h = 1e-3 * (1.0 + max_abs(x));
    let fp = at(h)?;
    let fm = at(-h)?;
    let (sign, mut f_prev) = if fp < v0 {
        (1.0, fp)
    } else if fm < v0 {
        (-1.0, fm)
    } else {
        // Minimum lies within [-h, h].
        return golden(&at, -h, h, tol).map(|(s, f)| if f < v0 { (s, f) } else { (0.0, v0) });
    };
    // Expand until the function increases.
    let mut lo = 0.0;
    let mut mid = sign * h;
    let mut hi;
    loop {
        h *= 2.0;
        hi = sign * h;
        let f_hi = at(hi)?;
        if f_hi >= f_prev {
            break;
        }
        lo = mid;
        mid = hi;
        f_prev = f_hi;
        if h > 1e12 {
            return Err(ConvexError::Diverged(h));
        }
    }
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let (s, f) = golden(&at, a, b, tol)?;
    Ok(if f < v0 { (s, f) } else { (0.0, v0) })
}

fn golden<A>(at: &A, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64), ConvexError>
where
    A: Fn(f64) -> Result<f64, ConvexError>,
{
    let r = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = at(c)?;
    let mut fd = at(d)?;
    let width = (tol * 1e-3).max(1e-15);
    for _ in 0..200 {
        if (b - a).abs() <= width * (1.0 + c.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = at(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_value() {
        let r = minimize_convex(|x| (x[0].abs(), vec![x[0].signum()]), &[3.7], 1e-9).unwrap();
        assert!(r.x[0].abs() < 1e-8, "{:?}", r.x);
    }

    #[test]
    fn quadratic_vertex() {
        let r = minimize_convex(
            |x| ((x[0] - 2.0).powi(2), vec![2.0 * (x[0] - 2.0)]),
            &[-5.0],
            1e-9,
        )
        .unwrap();
        assert!((r.x[0] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn polyak_with_known_bound() {
        let opts = ConvexOptions {
            lower_bound: Some(0.0),
            ..ConvexOptions::with_tol(1e-10)
        };
        let f = |x: &[f64]| {
            let v = (x[0] - 1.0).abs() + (x[1] + 2.0).abs();
            (v, vec![(x[0] - 1.0).signum(), (x[1] + 2.0).signum()])
        };
        let r = minimize_convex_with(f, &[10.0, 10.0], &opts).unwrap();
        assert!(r.value < 1e-8, "{}", r.value);
    }

    #[test]
    fn history_is_monotone() {
        let f = |x: &[f64]| {
            let v = x[0].abs() + 2.0 * (x[1] - x[0]).abs();
            let s = (x[1] - x[0]).signum();
            (v, vec![x[0].signum() - 2.0 * s, 2.0 * s])
        };
        let r = minimize_convex(f, &[4.0, -3.0], 1e-9).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn non_coercive_is_reported() {
        let f = |x: &[f64]| (-x[0], vec![-1.0]);
        assert!(matches!(
            minimize_convex(f, &[0.0], 1e-6),
            Err(ConvexError::Diverged(_))
        ));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let f = |x: &[f64]| (x[0].abs(), vec![x[0].signum()]);
        assert_eq!(
            minimize_convex(f, &[1.0], 0.0),
            Err(ConvexError::BadTolerance(0.0))
        );
    }
}
