//! Norms on `R^n` as first-class values.
//!
//! A [`NormSpec`] is a symbolic description that can be evaluated, dualised
//! and serialised. Analytic variants are evaluated in closed form; hull
//! gauges and the dual norms of intersections go through the program
//! builder, exactly (simplex) when every ingredient is polyhedral and via
//! the barrier solver when a Euclidean ball is involved.

mod encode;
mod extend;
mod hull;
mod spreading;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::convex::ConvexError;
use crate::linalg::{self, dot};
use crate::program::{Affine, ProgramBuilder, SolveError};

pub use extend::{extend_norm, EXTENSION_SAMPLE_DIRECTIONS};
pub use hull::{gauge_of_hull, gauge_of_hull_primal};
pub use spreading::spreading_composite_norm;

pub(crate) use encode::{encode_dual, encode_norm, is_polyhedral};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("dimension mismatch: norm acts on R^{expected}, got a vector of length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid {variant} norm: {reason}")]
    Invalid {
        variant: &'static str,
        reason: String,
    },
    #[error("{operation} is not supported for the {variant} variant")]
    Unsupported {
        variant: &'static str,
        operation: &'static str,
    },
    #[error("a norming functional of the zero vector does not exist")]
    ZeroVector,
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("sandwich ‖z‖ <= c2·|||z||| violated at z = {sample:?}: {ambient} > {bound}")]
    SandwichViolated {
        sample: Vec<f64>,
        ambient: f64,
        bound: f64,
    },
    #[error("spreading composite needs m <= dim, got m = {m}, dim = {dim}")]
    OrderTooLarge { m: usize, dim: usize },
    #[error("model norm is not known to be permutation and sign invariant; set `exhaustive` to enumerate supports")]
    NonSymmetricModel,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

/// Exponent `p ∈ [1, ∞]` of an `ℓ_p` norm. Serialises `∞` as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        let p = self.0;
        if p == 1.0 {
            Exponent::INFINITY
        } else if p.is_infinite() {
            Exponent(1.0)
        } else {
            Exponent(p / (p - 1.0))
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent(p)),
            Raw::Text(t) => match t.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(Exponent::INFINITY),
                other => other
                    .parse::<f64>()
                    .map(Exponent)
                    .map_err(|_| serde::de::Error::custom(format!("bad exponent {t:?}"))),
            },
        }
    }
}

/// Symbolic norm on `R^n`.
///
/// JSON form: an object with a `"variant"` discriminator, e.g.
/// `{"variant": "Lp", "p": "inf"}` or
/// `{"variant": "Scaled", "factor": 0.5, "base": {"variant": "Lp", "p": 2}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum NormSpec {
    Lp {
        p: Exponent,
    },
    /// Unit ball `{x : |f·x| <= 1 for every facet f}`.
    Polyhedral {
        facets: Vec<Vec<f64>>,
    },
    Scaled {
        factor: f64,
        base: Box<NormSpec>,
    },
    MaxOf {
        norms: Vec<NormSpec>,
    },
    /// Gauge of `conv(rho·B_ambient ∪ ±generators)`.
    HullGauge {
        rho: f64,
        ambient: Box<NormSpec>,
        generators: Vec<Vec<f64>>,
    },
    /// `max{ max_f |f·x|, ambient(x) / c2 }` for a family of extended functionals.
    SubspaceExtension {
        basis: Vec<Vec<f64>>,
        functionals: Vec<Vec<f64>>,
        ambient: Box<NormSpec>,
        c2: f64,
    },
    /// `max{ base(x) / (1 + eps), sup_{|F| = m} model(x restricted to F) }`.
    SpreadingComposite {
        base: Box<NormSpec>,
        model: Box<NormSpec>,
        m: usize,
        eps: f64,
        #[serde(default)]
        exhaustive: bool,
    },
}

/// A linear functional acting by dot product, with a bound on its dual norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    pub coeffs: Vec<f64>,
    pub dual_norm_bound: f64,
}

impl DualFunctional {
    pub fn new(coeffs: Vec<f64>, dual_norm_bound: f64) -> Self {
        Self {
            coeffs,
            dual_norm_bound,
        }
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: linalg::scale(&self.coeffs, s),
            dual_norm_bound: self.dual_norm_bound * s.abs(),
        }
    }
}

impl NormSpec {
    pub fn lp(p: f64) -> Self {
        NormSpec::Lp { p: Exponent(p) }
    }

    pub fn l1() -> Self {
        Self::lp(1.0)
    }

    pub fn l2() -> Self {
        Self::lp(2.0)
    }

    pub fn linf() -> Self {
        NormSpec::Lp {
            p: Exponent::INFINITY,
        }
    }

    pub fn polyhedral(facets: Vec<Vec<f64>>) -> Self {
        NormSpec::Polyhedral { facets }
    }

    pub fn scaled(factor: f64, base: NormSpec) -> Self {
        NormSpec::Scaled {
            factor,
            base: Box::new(base),
        }
    }

    pub fn max_of(norms: Vec<NormSpec>) -> Self {
        NormSpec::MaxOf { norms }
    }

    pub fn hull_gauge(rho: f64, ambient: NormSpec, generators: Vec<Vec<f64>>) -> Self {
        NormSpec::HullGauge {
            rho,
            ambient: Box::new(ambient),
            generators,
        }
    }

    pub fn spreading(base: NormSpec, model: NormSpec, m: usize, eps: f64) -> Self {
        NormSpec::SpreadingComposite {
            base: Box::new(base),
            model: Box::new(model),
            m,
            eps,
            exhaustive: false,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            NormSpec::Lp { .. } => "Lp",
            NormSpec::Polyhedral { .. } => "Polyhedral",
            NormSpec::Scaled { .. } => "Scaled",
            NormSpec::MaxOf { .. } => "MaxOf",
            NormSpec::HullGauge { .. } => "HullGauge",
            NormSpec::SubspaceExtension { .. } => "SubspaceExtension",
            NormSpec::SpreadingComposite { .. } => "SpreadingComposite",
        }
    }

    /// Dimension fixed by the data of the norm, if any (`ℓ_p` works in every dimension).
    pub fn dim(&self) -> Option<usize> {
        match self {
            NormSpec::Lp { .. } => None,
            NormSpec::Polyhedral { facets } => facets.first().map(Vec::len),
            NormSpec::Scaled { base, .. } => base.dim(),
            NormSpec::MaxOf { norms } => norms.iter().find_map(NormSpec::dim),
            NormSpec::HullGauge {
                ambient,
                generators,
                ..
            } => generators.first().map(Vec::len).or_else(|| ambient.dim()),
            NormSpec::SubspaceExtension {
                functionals,
                ambient,
                ..
            } => functionals.first().map(Vec::len).or_else(|| ambient.dim()),
            NormSpec::SpreadingComposite { base, model, .. } => base.dim().or_else(|| model.dim()),
        }
    }

    pub fn check_dim(&self, v: &[f64]) -> Result<(), NormError> {
        match self.dim() {
            Some(d) if d != v.len() => Err(NormError::DimensionMismatch {
                expected: d,
                found: v.len(),
            }),
            _ if v.is_empty() => Err(NormError::DimensionMismatch {
                expected: self.dim().unwrap_or(1),
                found: 0,
            }),
            _ => Ok(()),
        }
    }

    /// Structural checks: positive parameters, consistent dimensions, and a
    /// spanning facet family for polyhedral balls.
    pub fn validate(&self) -> Result<(), NormError> {
        let invalid = |reason: String| NormError::Invalid {
            variant: self.variant_name(),
            reason,
        };
        let same_len = |vs: &[Vec<f64>]| vs.windows(2).all(|w| w[0].len() == w[1].len());
        let finite = |vs: &[Vec<f64>]| vs.iter().flatten().all(|v| v.is_finite());
        match self {
            NormSpec::Lp { p } => {
                if !(p.0 >= 1.0) {
                    return Err(invalid(format!("exponent must be >= 1, got {}", p.0)));
                }
            }
            NormSpec::Polyhedral { facets } => {
                if facets.is_empty() {
                    return Err(invalid("facet list is empty".into()));
                }
                if !same_len(facets) || facets[0].is_empty() || !finite(facets) {
                    return Err(invalid("facets must be finite vectors of one length".into()));
                }
                let n = facets[0].len();
                if linalg::rank(&linalg::rows(facets, n), 1e-12) < n {
                    return Err(invalid("facets do not span the dual space".into()));
                }
            }
            NormSpec::Scaled { factor, base } => {
                if !(*factor > 0.0 && factor.is_finite()) {
                    return Err(invalid(format!("factor must be positive, got {factor}")));
                }
                base.validate()?;
            }
            NormSpec::MaxOf { norms } => {
                if norms.is_empty() {
                    return Err(invalid("no component norms".into()));
                }
                for n in norms {
                    n.validate()?;
                }
                let dims: Vec<usize> = norms.iter().filter_map(NormSpec::dim).collect();
                if dims.windows(2).any(|w| w[0] != w[1]) {
                    return Err(invalid("components act on different dimensions".into()));
                }
            }
            NormSpec::HullGauge {
                rho,
                ambient,
                generators,
            } => {
                if !(*rho > 0.0 && rho.is_finite()) {
                    return Err(invalid(format!("rho must be positive, got {rho}")));
                }
                ambient.validate()?;
                if !same_len(generators) || !finite(generators) {
                    return Err(invalid("generators must be finite vectors of one length".into()));
                }
                if let (Some(g), Some(a)) = (generators.first(), ambient.dim()) {
                    if g.len() != a {
                        return Err(invalid("generator and ambient dimensions differ".into()));
                    }
                }
            }
            NormSpec::SubspaceExtension {
                functionals,
                ambient,
                c2,
                ..
            } => {
                if !(*c2 > 0.0 && c2.is_finite()) {
                    return Err(invalid(format!("c2 must be positive, got {c2}")));
                }
                ambient.validate()?;
                if !same_len(functionals) || !finite(functionals) {
                    return Err(invalid("functionals must be finite vectors of one length".into()));
                }
            }
            NormSpec::SpreadingComposite {
                base,
                model,
                m,
                eps,
                ..
            } => {
                if *m < 2 {
                    return Err(invalid(format!("support size m must be >= 2, got {m}")));
                }
                if !(*eps > 0.0 && eps.is_finite()) {
                    return Err(invalid(format!("eps must be positive, got {eps}")));
                }
                base.validate()?;
                model.validate()?;
                if let Some(d) = self.dim() {
                    if *m > d {
                        return Err(NormError::OrderTooLarge { m: *m, dim: d });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, v: &[f64]) -> Result<f64, NormError> {
        norm_eval(self, v)
    }

    pub fn dual(&self, f: &[f64]) -> Result<f64, NormError> {
        dual_norm_eval(self, f)
    }
}

pub(crate) fn lp_value(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        linalg::max_abs(v)
    } else if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        linalg::euclid(v)
    } else {
        let m = linalg::max_abs(v);
        if m == 0.0 {
            return 0.0;
        }
        m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Norming functional of `v != 0` for `ℓ_p`: dual norm one, value `‖v‖_p`.
pub(crate) fn lp_norming(v: &[f64], p: f64) -> Vec<f64> {
    let n = v.len();
    if p.is_infinite() {
        let k = (0..n)
            .max_by(|&a, &b| {
                v[a].abs()
                    .partial_cmp(&v[b].abs())
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        let mut g = vec![0.0; n];
        g[k] = v[k].signum();
        g
    } else if p == 1.0 {
        v.iter()
            .map(|&x| if x == 0.0 { 0.0 } else { x.signum() })
            .collect()
    } else if p == 2.0 {
        let r = linalg::euclid(v);
        v.iter().map(|x| x / r).collect()
    } else {
        let r = lp_value(v, p);
        v.iter()
            .map(|&x| x.signum() * (x.abs() / r).powf(p - 1.0))
            .collect()
    }
}

pub fn norm_eval(spec: &NormSpec, v: &[f64]) -> Result<f64, NormError> {
    spec.check_dim(v)?;
    eval_inner(spec, v)
}

fn eval_inner(spec: &NormSpec, v: &[f64]) -> Result<f64, NormError> {
    Ok(match spec {
        NormSpec::Lp { p } => lp_value(v, p.0),
        NormSpec::Polyhedral { facets } => facets
            .iter()
            .map(|f| dot(f, v).abs())
            .fold(0.0, f64::max),
        NormSpec::Scaled { factor, base } => factor * eval_inner(base, v)?,
        NormSpec::MaxOf { norms } => {
            let mut best = 0.0_f64;
            for n in norms {
                best = best.max(eval_inner(n, v)?);
            }
            best
        }
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => hull::gauge_unchecked(*rho, ambient, generators, v)?,
        NormSpec::SubspaceExtension {
            functionals,
            ambient,
            c2,
            ..
        } => {
            let sup = functionals
                .iter()
                .map(|f| dot(f, v).abs())
                .fold(0.0, f64::max);
            sup.max(eval_inner(ambient, v)? / c2)
        }
        NormSpec::SpreadingComposite {
            base,
            model,
            m,
            eps,
            exhaustive,
        } => spreading::eval(base, model, *m, *eps, *exhaustive, v)?.0,
    })
}

/// `sup{ f·x : ‖x‖ <= 1 }`.
pub fn dual_norm_eval(spec: &NormSpec, f: &[f64]) -> Result<f64, NormError> {
    spec.check_dim(f)?;
    dual_inner(spec, f)
}

fn dual_inner(spec: &NormSpec, f: &[f64]) -> Result<f64, NormError> {
    if f.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    match spec {
        NormSpec::Lp { p } => Ok(lp_value(f, p.conjugate().0)),
        NormSpec::Scaled { factor, base } => Ok(dual_inner(base, f)? / factor),
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => {
            let w = generators
                .iter()
                .map(|g| dot(g, f).abs())
                .fold(0.0, f64::max);
            Ok(w.max(rho * dual_inner(ambient, f)?))
        }
        _ => Ok(support_program(spec, f, "dual_norm_eval")?.1),
    }
}

/// Maximises `c·x` over the unit ball through the program encoding of `spec`.
fn support_program(
    spec: &NormSpec,
    c: &[f64],
    operation: &'static str,
) -> Result<(Vec<f64>, f64), NormError> {
    let mut b = ProgramBuilder::new();
    let x = b.vars(c.len());
    encode_norm(spec, &mut b, &x, &Affine::constant(1.0)).map_err(|e| match e {
        NormError::Unsupported { variant, .. } => NormError::Unsupported { variant, operation },
        other => other,
    })?;
    let sol = b.maximize(&Affine::combination(c, &x))?;
    Ok((sol.eval_all(&x), sol.objective))
}

/// A point of the unit ball maximising `c·x`.
pub fn support_point(spec: &NormSpec, c: &[f64]) -> Result<Vec<f64>, NormError> {
    spec.check_dim(c)?;
    support_inner(spec, c)
}

fn support_inner(spec: &NormSpec, c: &[f64]) -> Result<Vec<f64>, NormError> {
    if c.iter().all(|&x| x == 0.0) {
        return Ok(vec![0.0; c.len()]);
    }
    match spec {
        NormSpec::Lp { p } => Ok(lp_norming(c, p.conjugate().0)),
        NormSpec::Scaled { factor, base } => Ok(linalg::scale(&support_inner(base, c)?, 1.0 / factor)),
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => {
            let amb = rho * dual_inner(ambient, c)?;
            let best = generators
                .iter()
                .map(|g| (dot(g, c), g))
                .max_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap());
            match best {
                Some((val, g)) if val.abs() > amb => Ok(linalg::scale(g, val.signum())),
                _ => Ok(linalg::scale(&support_inner(ambient, c)?, *rho)),
            }
        }
        _ => Ok(support_program(spec, c, "support_point")?.0),
    }
}

/// A functional of dual norm one attaining `f(v) = ‖v‖`.
pub fn norming_functional(spec: &NormSpec, v: &[f64]) -> Result<DualFunctional, NormError> {
    spec.check_dim(v)?;
    if v.iter().all(|&x| x == 0.0) {
        return Err(NormError::ZeroVector);
    }
    Ok(DualFunctional::new(norming_inner(spec, v)?, 1.0))
}

fn norming_inner(spec: &NormSpec, v: &[f64]) -> Result<Vec<f64>, NormError> {
    match spec {
        NormSpec::Lp { p } => Ok(lp_norming(v, p.0)),
        NormSpec::Polyhedral { facets } => {
            let (f, val) = facets
                .iter()
                .map(|f| (f, dot(f, v)))
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .expect("validated: facets nonempty");
            Ok(linalg::scale(f, val.signum()))
        }
        NormSpec::Scaled { factor, base } => Ok(linalg::scale(&norming_inner(base, v)?, *factor)),
        NormSpec::MaxOf { norms } => {
            let mut best: Option<(f64, &NormSpec)> = None;
            for n in norms {
                let val = eval_inner(n, v)?;
                if best.is_none_or(|(b, _)| val > b) {
                    best = Some((val, n));
                }
            }
            norming_inner(best.expect("validated: nonempty").1, v)
        }
        NormSpec::HullGauge {
            rho,
            ambient,
            generators,
        } => Ok(hull::norming(*rho, ambient, generators, v)?.0),
        NormSpec::SubspaceExtension {
            functionals,
            ambient,
            c2,
            ..
        } => {
            let amb = eval_inner(ambient, v)? / c2;
            let best = functionals
                .iter()
                .map(|f| (f, dot(f, v)))
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap());
            match best {
                Some((f, val)) if val.abs() >= amb => Ok(linalg::scale(f, val.signum())),
                _ => Ok(linalg::scale(&norming_inner(ambient, v)?, 1.0 / c2)),
            }
        }
        NormSpec::SpreadingComposite {
            base,
            model,
            m,
            eps,
            exhaustive,
        } => {
            let (val, support) = spreading::eval(base, model, *m, *eps, *exhaustive, v)?;
            let b = eval_inner(base, v)? / (1.0 + eps);
            if b >= val {
                return Ok(linalg::scale(&norming_inner(base, v)?, 1.0 / (1.0 + eps)));
            }
            let masked = spreading::mask(v, &support);
            let g = norming_inner(model, &masked)?;
            Ok(spreading::mask(&g, &support))
        }
    }
}

/// Evaluates `norm(x)` for a batch, returning the first error.
pub fn eval_many(spec: &NormSpec, xs: &[Vec<f64>]) -> Result<Vec<f64>, NormError> {
    xs.iter().map(|x| norm_eval(spec, x)).collect()
}
