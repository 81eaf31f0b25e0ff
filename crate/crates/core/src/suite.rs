//! Battery of end-to-end checks, one per named criterion, with
//! machine-readable results.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antipodal::{
    antipodal_from_biorthogonal, certify_antipodal, AntipodalCertificate, BiorthogonalSystem, RescaleMode,
};
use crate::equilateral::{find_equilateral_c0, petty_certificate, search_equilateral, FixedPointStatus};
use crate::linalg;
use crate::lp::{solve_lp, LinearProgram, LpStatus};
use crate::norms::{extend_norm, gauge_of_hull, norm_eval, spreading_composite_norm, NormSpec};
use crate::oracle;
use crate::points::PointSet;
use crate::renorm::{bm_bound_audit, build_antipodal_renorm, corollary_renorm, RenormResult};
use crate::sampling;

pub const SCHEMA_VERSION: u32 = 1;

pub const CRITERIA: [&str; 8] = [
    "fixed-point",
    "renorm",
    "petty-closure",
    "danzer-grunbaum",
    "oracle-equivalence",
    "norm-axioms",
    "spreading-norm",
    "corollary",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuiteError {
    #[error("unknown criterion {name:?}; valid names: {}", valid.join(", "))]
    UnknownCriterion { name: String, valid: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Directions sampled by sandwich audits.
    pub n_dirs: usize,
    /// Samples per variant in the norm-axiom checks.
    pub axiom_samples: usize,
    /// Empty means every criterion.
    #[serde(default)]
    pub only: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_dirs: 1000,
            axiom_samples: 10_000,
            only: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub limit: f64,
    pub passed: bool,
}

impl Measurement {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            limit,
            passed: value >= limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub name: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    /// Set when the criterion aborted before finishing its measurements.
    pub error: Option<String>,
}

impl CriterionReport {
    pub fn failing(&self) -> Vec<&Measurement> {
        self.measurements.iter().filter(|m| !m.passed).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: SuiteConfig,
    pub criteria: Vec<CriterionReport>,
    pub passed: bool,
}

type Outcome = Result<Vec<Measurement>, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn check_names(names: &[String]) -> Result<(), SuiteError> {
    for name in names {
        if !CRITERIA.contains(&name.as_str()) {
            return Err(SuiteError::UnknownCriterion {
                name: name.clone(),
                valid: CRITERIA.iter().map(|s| s.to_string()).collect(),
            });
        }
    }
    Ok(())
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    check_names(&config.only)?;
    let selected: Vec<&str> = CRITERIA
        .iter()
        .copied()
        .filter(|c| config.only.is_empty() || config.only.iter().any(|o| o == c))
        .collect();
    let criteria: Vec<CriterionReport> = selected
        .par_iter()
        .map(|name| run_criterion(name, config))
        .collect::<Result<_, _>>()?;
    let passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        criteria,
        passed,
    })
}

pub fn run_criterion(name: &str, config: &SuiteConfig) -> Result<CriterionReport, SuiteError> {
    check_names(&[name.to_string()])?;
    let outcome = match name {
        "fixed-point" => fixed_point(),
        "renorm" => renorm(config),
        "petty-closure" => petty_closure(config),
        "danzer-grunbaum" => danzer_grunbaum(config),
        "oracle-equivalence" => oracle_equivalence(config),
        "norm-axioms" => norm_axioms(config),
        "spreading-norm" => spreading_norm(config),
        "corollary" => corollary(),
        _ => unreachable!("names are checked above"),
    };
    Ok(match outcome {
        Ok(measurements) => CriterionReport {
            name: name.to_string(),
            passed: measurements.iter().all(|m| m.passed),
            measurements,
            error: None,
        },
        Err(e) => CriterionReport {
            name: name.to_string(),
            passed: false,
            measurements: Vec::new(),
            error: Some(e),
        },
    })
}

/// `MaxOf{(2/3)·Lp(∞), (1/√N)·Lp(2)}`
pub fn mixed_c0_norm(n: usize) -> NormSpec {
    NormSpec::max_of(vec![
        NormSpec::scaled(2.0 / 3.0, NormSpec::linf()),
        NormSpec::scaled(1.0 / (n as f64).sqrt(), NormSpec::l2()),
    ])
}

fn fixed_point_specs() -> Vec<(String, NormSpec, usize)> {
    let mut out = Vec::new();
    for n in [8, 16, 32] {
        out.push((format!("sup N={n}"), NormSpec::linf(), n));
        out.push((format!("mixed N={n}"), mixed_c0_norm(n), n));
    }
    out
}

fn fixed_point() -> Outcome {
    let mut ms = Vec::new();
    for (label, spec, n) in fixed_point_specs() {
        let start = Instant::now();
        let run = find_equilateral_c0(&spec, n, 1e-12, 1000).map_err(err)?;
        let secs = start.elapsed().as_secs_f64();
        let dev = run
            .report
            .distances
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, d)| (d - 1.0).abs()))
            .fold(0.0, f64::max);
        ms.push(Measurement::at_least(
            format!("{label}: converged"),
            (run.state.status == FixedPointStatus::Converged) as u8 as f64,
            1.0,
        ));
        ms.push(Measurement::at_most(format!("{label}: max |distance - 1|"), dev, 1e-8));
        ms.push(Measurement::at_most(format!("{label}: seconds"), secs, 10.0));
        if label.starts_with("sup") {
            let max_eps = run.state.eps.iter().fold(0.0_f64, |a, e| a.max(e.abs()));
            ms.push(Measurement::at_most(format!("{label}: max |eps'|"), max_eps, 0.0));
        }
    }
    Ok(ms)
}

/// Renorming of the standard basis of `R^n` built from the per-pair
/// certificate with `c2 = 1`.
pub fn basis_renorm(spec: &NormSpec, n: usize) -> Result<RenormResult, String> {
    let s = PointSet::standard_basis(n);
    let outcome = certify_antipodal(spec, &s, 1.0).map_err(err)?;
    let cert = outcome
        .certificate()
        .ok_or_else(|| format!("standard basis of R^{n} not certified"))?;
    build_antipodal_renorm(spec, &s, cert).map_err(err)
}

fn renorm(config: &SuiteConfig) -> Outcome {
    let mut ms = Vec::new();
    for spec in [NormSpec::l2(), NormSpec::linf()] {
        for n in 2..=6 {
            let label = format!("{} n={n}", describe(&spec));
            let r = basis_renorm(&spec, n)?;
            let (lo, hi) = off_diagonal_range(&r.report.distances);
            ms.push(Measurement::at_least(format!("{label}: min distance"), lo, 1.0 - 1e-6));
            ms.push(Measurement::at_most(format!("{label}: max distance"), hi, 1.0 + 1e-6));
            let a = bm_bound_audit(&spec, &r, config.n_dirs, config.seed, 1e-9).map_err(err)?;
            ms.push(Measurement::at_least(format!("{label}: min gauge ratio"), a.min_ratio, 0.5 - 1e-9));
            ms.push(Measurement::at_most(
                format!("{label}: max gauge ratio"),
                a.max_ratio,
                a.upper_bound + 1e-9,
            ));
            ms.push(Measurement::at_least(
                format!("{label}: support lower bound"),
                r.lower_bounds.passed as u8 as f64,
                1.0,
            ));
        }
    }
    Ok(ms)
}

fn describe(spec: &NormSpec) -> String {
    match spec {
        NormSpec::Lp { p } if p.is_infinite() => "Lp(inf)".into(),
        NormSpec::Lp { p } => format!("Lp({})", p.0),
        other => other.variant_name().into(),
    }
}

fn off_diagonal_range(m: &[Vec<f64>]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, row) in m.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if i != j {
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
    }
    (lo, hi)
}

fn petty_closure(config: &SuiteConfig) -> Outcome {
    let mut sets: Vec<(String, NormSpec, PointSet)> = Vec::new();
    for (label, spec, n) in fixed_point_specs() {
        let run = find_equilateral_c0(&spec, n, 1e-12, 1000).map_err(err)?;
        sets.push((format!("fixed point {label}"), spec, run.points));
    }
    for spec in [NormSpec::l2(), NormSpec::linf()] {
        for n in 2..=6 {
            let r = basis_renorm(&spec, n)?;
            sets.push((format!("renorm {} n={n}", describe(&spec)), r.new_norm, r.points));
        }
    }
    for (spec, k, dim) in [
        (NormSpec::l2(), 4, 3),
        (NormSpec::linf(), 4, 2),
        (NormSpec::l1(), 4, 3),
        (NormSpec::lp(3.0), 3, 2),
    ] {
        let r = search_equilateral(&spec, k, dim, config.seed).map_err(err)?;
        sets.push((format!("search {} k={k} dim={dim}", describe(&spec)), spec, r.points));
    }
    let mut ms = Vec::new();
    for (label, spec, s) in sets {
        let cert = petty_certificate(&spec, &s, 1e-6).map_err(|e| format!("{label}: {e}"))?;
        let lambda = crate::equilateral::verify_equilateral(&spec, &s, 1e-6).map_err(err)?.lambda;
        ms.push(Measurement::at_most(format!("{label}: |d - lambda|"), (cert.d - lambda).abs(), 1e-6));
        ms.push(Measurement::at_least(format!("{label}: min slack"), cert.min_slack(), -1e-9));
        let check = cert.verify(&spec, 1e-9).map_err(err)?;
        ms.push(Measurement::at_least(format!("{label}: reverified"), check.passed as u8 as f64, 1.0));
    }
    Ok(ms)
}

/// Uniform sample of `count` points from the Euclidean unit ball.
pub fn random_ball_points(dim: usize, count: usize, seed: u64) -> PointSet {
    let mut rng = sampling::rng(seed);
    let points = (0..count)
        .map(|_| {
            let u = sampling::direction(&mut rng, dim);
            let r: f64 = rng.random::<f64>().powf(1.0 / dim as f64);
            linalg::scale(&u, r)
        })
        .collect();
    PointSet { points, labels: None }
}

fn danzer_grunbaum(config: &SuiteConfig) -> Outcome {
    let spec = NormSpec::linf();
    let mut ms = Vec::new();
    for n in [2, 3] {
        let s = PointSet::cube_vertices(n);
        let outcome = certify_antipodal(&spec, &s, 1.0).map_err(err)?;
        let cert = outcome
            .certificate()
            .ok_or_else(|| format!("cube vertices of dimension {n} not certified"))?;
        let check = cert.verify(&spec, 1e-9).map_err(err)?;
        ms.push(Measurement::at_most(format!("cube n={n}: |d - 2|"), (cert.d - 2.0).abs(), 1e-9));
        ms.push(Measurement::at_most(format!("cube n={n}: |c1 - 1|"), (check.max_point_norm - 1.0).abs(), 1e-9));
        ms.push(Measurement::at_most(format!("cube n={n}: c2"), check.max_dual_norm, 1.0 + 1e-9));
        ms.push(Measurement::at_least(format!("cube n={n}: reverified"), check.passed as u8 as f64, 1.0));

        let k = (1 << n) + 1;
        let failures = (0..100u64)
            .into_par_iter()
            .map(|t| {
                let s = random_ball_points(n, k, config.seed.wrapping_mul(1000).wrapping_add(t));
                certify_antipodal(&spec, &s, 1.0).map(|o| !o.is_certified())
            })
            .collect::<Result<Vec<bool>, _>>()
            .map_err(err)?
            .into_iter()
            .filter(|&f| f)
            .count();
        ms.push(Measurement::at_least(
            format!("{k} random points in R^{n}: sets with a failing pair (of 100)"),
            failures as f64,
            100.0,
        ));
    }
    Ok(ms)
}

/// Random bounded LP: `n` variables, `m` random rows, a box `|x_i| <= 5`
/// and sometimes one equality.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut rng = sampling::rng(seed);
    let n = rng.random_range(2..=3);
    let m = rng.random_range(1..=6 - n);
    let mut lp = LinearProgram::new(sampling::gaussian(&mut rng, n));
    for _ in 0..m {
        let row = sampling::gaussian(&mut rng, n);
        let rhs = rng.random_range(-1.0..2.0);
        lp = lp.le(row, rhs);
    }
    for i in 0..n {
        lp = lp.le(linalg::unit(n, i), 5.0).le(linalg::neg(&linalg::unit(n, i)), 5.0);
    }
    if rng.random_bool(0.25) {
        let row = sampling::gaussian(&mut rng, n);
        let rhs = rng.random_range(-1.0..1.0);
        lp = lp.eq(row, rhs);
    }
    lp
}

/// Random 2-D hull instance: polyhedral ambient with 2 to 4 facet pairs of
/// length in `[0.5, 1.5]`, two of them at least 30° apart, `rho` in
/// `[0.3, 1]` and 1 to 4 generators.
pub fn random_hull_instance(seed: u64) -> (f64, NormSpec, Vec<Vec<f64>>) {
    let mut rng = sampling::rng(seed);
    let k = rng.random_range(2..=4);
    let facets: Vec<Vec<f64>> = loop {
        let angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..std::f64::consts::PI)).collect();
        let spread = angles
            .iter()
            .flat_map(|a| angles.iter().map(move |b| (a - b).sin().abs()))
            .fold(0.0, f64::max);
        if spread >= 0.5 {
            break angles
                .iter()
                .map(|a| linalg::scale(&[a.cos(), a.sin()], rng.random_range(0.5..1.5)))
                .collect();
        }
    };
    let rho = rng.random_range(0.3..1.0);
    let g = rng.random_range(1..=4);
    let generators = (0..g).map(|_| linalg::scale(&sampling::cube(&mut rng, 2), 2.0)).collect();
    (rho, NormSpec::polyhedral(facets), generators)
}

fn oracle_equivalence(config: &SuiteConfig) -> Outcome {
    let lp_errors: Vec<f64> = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let lp = random_lp(config.seed.wrapping_mul(7919).wrapping_add(t));
            let res = solve_lp(&lp).map_err(err)?;
            Ok(match (oracle::lp_vertex_enumeration(&lp, 1e-9), res.status) {
                (Some(v), LpStatus::Optimal) => (v - res.value).abs(),
                (None, LpStatus::Infeasible) => 0.0,
                _ => f64::INFINITY,
            })
        })
        .collect::<Result<_, String>>()?;
    let lp_max = lp_errors.iter().copied().fold(0.0, f64::max);

    let gauge_errors: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|t| {
            let (rho, ambient, generators) = random_hull_instance(config.seed.wrapping_mul(104729).wrapping_add(t));
            let amb = |u: [f64; 2]| norm_eval(&ambient, &u).unwrap_or(f64::NAN);
            let poly = oracle::hull_polygon_2d(rho, amb, &generators, 1 << 15);
            let mut rng = sampling::rng(t);
            let mut worst = 0.0_f64;
            for _ in 0..20 {
                let v = sampling::cube(&mut rng, 2);
                let g = gauge_of_hull(rho, &ambient, &generators, &v).map_err(err)?;
                let scan = oracle::polygon_gauge(&poly, [v[0], v[1]]);
                worst = worst.max((g - scan).abs() / scan);
            }
            Ok(worst)
        })
        .collect::<Result<_, String>>()?;
    let gauge_max = gauge_errors.iter().copied().fold(0.0, f64::max);

    Ok(vec![
        Measurement::at_most("LP vs vertex enumeration: max |difference| over 1000 LPs", lp_max, 1e-9),
        Measurement::at_most("hull gauge vs boundary scan: max relative error over 1000 queries", gauge_max, 1e-3),
    ])
}

/// One instance of every norm variant, with its dimension.
pub fn variant_instances() -> Result<Vec<(String, NormSpec, usize)>, String> {
    let ext = extend_norm(
        3,
        &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]],
        &NormSpec::l1(),
        &NormSpec::l2(),
        2.0,
    )
    .map_err(err)?;
    let hex = NormSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
    let mut weighted: Vec<Vec<f64>> = (0..5).map(|i| linalg::scale(&linalg::unit(5, i), 1.0 + i as f64)).collect();
    weighted.push(vec![1.0, 1.0, 0.0, 0.0, 0.0]);
    let weighted = NormSpec::polyhedral(weighted);
    Ok(vec![
        ("Lp(1)".into(), NormSpec::l1(), 3),
        ("Lp(2)".into(), NormSpec::l2(), 3),
        ("Lp(inf)".into(), NormSpec::linf(), 3),
        ("Lp(3)".into(), NormSpec::lp(3.0), 3),
        ("Polyhedral".into(), hex, 2),
        ("Scaled".into(), NormSpec::scaled(0.5, NormSpec::lp(3.0)), 3),
        ("MaxOf".into(), NormSpec::max_of(vec![NormSpec::l1(), NormSpec::scaled(2.0, NormSpec::l2())]), 3),
        (
            "HullGauge (polyhedral ambient)".into(),
            NormSpec::hull_gauge(0.5, NormSpec::linf(), vec![vec![1.0, 2.0, 0.0], vec![0.0, -1.0, 1.5]]),
            3,
        ),
        (
            "HullGauge (Euclidean ambient)".into(),
            NormSpec::hull_gauge(0.7, NormSpec::l2(), vec![vec![1.0, -1.0]]),
            2,
        ),
        ("SubspaceExtension".into(), ext, 3),
        (
            "SpreadingComposite".into(),
            NormSpec::spreading(NormSpec::l2(), NormSpec::l2(), 2, 0.1),
            5,
        ),
        (
            "SpreadingComposite (exhaustive)".into(),
            NormSpec::SpreadingComposite {
                base: Box::new(NormSpec::l1()),
                model: Box::new(weighted),
                m: 2,
                eps: 0.2,
                exhaustive: true,
            },
            5,
        ),
    ])
}

fn norm_axioms(config: &SuiteConfig) -> Outcome {
    let mut ms = Vec::new();
    for (k, (label, spec, dim)) in variant_instances()?.into_iter().enumerate() {
        let seed = config.seed.wrapping_mul(31).wrapping_add(k as u64);
        let worst = (0..config.axiom_samples)
            .into_par_iter()
            .map(|t| {
                let mut rng = sampling::rng(seed.wrapping_mul(1_000_003).wrapping_add(t as u64));
                let x = sampling::cube(&mut rng, dim);
                let y = sampling::cube(&mut rng, dim);
                let a: f64 = rng.random_range(-3.0..3.0);
                let n = |v: &[f64]| norm_eval(&spec, v).map_err(err);
                let nx = n(&x)?;
                let homogeneity = -(n(&linalg::scale(&x, a))? - a.abs() * nx).abs();
                let symmetry = -(n(&linalg::neg(&x))? - nx).abs();
                let triangle = nx + n(&y)? - n(&linalg::add(&x, &y))?;
                Ok(homogeneity.min(symmetry).min(triangle))
            })
            .collect::<Result<Vec<f64>, String>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        ms.push(Measurement::at_least(format!("{label}: min slack"), worst, -1e-9));
    }
    Ok(ms)
}

fn spreading_norm(config: &SuiteConfig) -> Outcome {
    let eps = 0.1;
    let spec = NormSpec::spreading(NormSpec::l2(), NormSpec::l2(), 2, eps);
    let dim = 8;
    let mut diffs = Vec::new();
    let mut sign_gap = 0.0_f64;
    for i in 0..dim {
        for j in i + 1..dim {
            let (ei, ej) = (linalg::unit(dim, i), linalg::unit(dim, j));
            let d = spreading_composite_norm(&spec, &linalg::sub(&ei, &ej)).map_err(err)?;
            let s = spreading_composite_norm(&spec, &linalg::add(&ei, &ej)).map_err(err)?;
            diffs.push(d);
            sign_gap = sign_gap.max((d - s).abs());
        }
    }
    let lo = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut rng = sampling::rng(config.seed);
    let mut sandwich = f64::INFINITY;
    for _ in 0..1000 {
        let x = sampling::gaussian(&mut rng, dim);
        let v = spreading_composite_norm(&spec, &x).map_err(err)?;
        sandwich = sandwich.min(v - linalg::euclid(&x) / (1.0 + eps));
    }
    Ok(vec![
        Measurement::at_most("pairs compared", diffs.len() as f64, 28.0),
        Measurement::at_least("pairs compared", diffs.len() as f64, 28.0),
        Measurement::at_most("spread of |||e_n - e_m||| over pairs", hi - lo, 1e-12),
        Measurement::at_most("max ||||e_n + e_m||| - |||e_n - e_m||||", sign_gap, 1e-12),
        Measurement::at_least("min |||x||| - ‖x‖/(1+eps) over 1000 samples", sandwich, 0.0),
    ])
}

fn constants_gap(a: &AntipodalCertificate, b: &AntipodalCertificate) -> f64 {
    (a.c1 - b.c1).abs().max((a.c2 - b.c2).abs()).max((a.d - b.d).abs())
}

fn corollary() -> Outcome {
    let spec = NormSpec::l2();
    let mut ms = Vec::new();
    for n in 2..=6 {
        let sys = BiorthogonalSystem::standard(&spec, n).map_err(err)?;
        let r = corollary_renorm(&spec, &sys).map_err(err)?;
        ms.push(Measurement::at_most(format!("n={n}: |distortion bound - 2|"), (r.distortion_bound - 2.0).abs(), 0.0));
        let direct = basis_renorm(&spec, n)?;
        let gap = r
            .report
            .distances
            .iter()
            .flatten()
            .zip(direct.report.distances.iter().flatten())
            .fold(0.0_f64, |a, (p, q)| a.max((p - q).abs()));
        ms.push(Measurement::at_most(format!("n={n}: distances vs per-pair certificate path"), gap, 1e-6));
    }
    let basis = antipodal_from_biorthogonal(&spec, &BiorthogonalSystem::standard(&spec, 3).map_err(err)?).map_err(err)?;
    let cube = certify_antipodal(&NormSpec::linf(), &PointSet::cube_vertices(2), 1.0)
        .map_err(err)?
        .certificate()
        .cloned()
        .ok_or("square not certified")?;
    let mut worst = 0.0_f64;
    for cert in [&basis, &cube] {
        for mode in [RescaleMode::ScaleFunctionals, RescaleMode::ScalePoints] {
            for lambda in [0.5, 2.0, 3.7] {
                let back = cert
                    .rescale(lambda, mode)
                    .and_then(|c| c.rescale(1.0 / lambda, mode))
                    .map_err(err)?;
                worst = worst.max(constants_gap(cert, &back));
            }
        }
    }
    ms.push(Measurement::at_most("rescale round trip: max constant change", worst, 1e-12));
    Ok(ms)
}
