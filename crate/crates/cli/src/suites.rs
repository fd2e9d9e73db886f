//! Verification suites run by `fasol verify`. Every suite is deterministic:
//! evaluation points are derived from the configuration by fixed offset
//! tables, so repeated runs render byte-identical reports.

use crate::config::RunConfig;
use crate::report::Report;
use fasol::fundsol::{delta_to_index, DeltaVector, ProblemConfig};
use fasol::lauricella::{fa_decomposed, fa_direct, fa_recurrence};
use fasol::verify::{
    boundary_property_check, constructive_identity_check, residual_suite, singularity_fit,
    FDPolicy, FDScheme,
};
use fasol::{Error, Result};

type SmoothField = Box<dyn Fn(&[f64]) -> f64>;

const PDE_RESIDUAL_THRESHOLD: f64 = 1e-5;
const SLOPE_THRESHOLD: f64 = 0.01;
const BOUNDARY_THRESHOLD: f64 = 1e-3;
const IDENTITY_THRESHOLD: f64 = 1e-6;
const AGREEMENT_THRESHOLD: f64 = 1e-8;

/// Multiplicative factors applied to singular coordinates and additive
/// offsets applied to free coordinates when deriving interior test points.
const MULT: [f64; 6] = [1.4, 0.7, 1.8, 1.2, 0.8, 1.6];
const ADD: [f64; 6] = [0.9, -0.6, 0.5, -0.8, 0.7, 1.1];

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn interior_points(cfg: &ProblemConfig, x0: &[f64], count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|p| {
            (0..cfg.m())
                .map(|i| {
                    if i < cfg.n() {
                        x0[i] * MULT[(p + i) % MULT.len()]
                    } else {
                        x0[i] + ADD[(p + i) % ADD.len()]
                    }
                })
                .collect()
        })
        .collect()
}

pub fn suite_pde(rc: &RunConfig) -> Result<Report> {
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let points = interior_points(&cfg, &x0, 6);
    let policy = FDPolicy::Adaptive {
        rel_h: 7e-3,
        order: 4,
    };
    let res = residual_suite(&cfg, &x0, &points, &policy, rc.gamma)?;
    let mut report = Report::new("pde");
    report.check(
        "pde-residual-max".into(),
        PDE_RESIDUAL_THRESHOLD,
        res.max_normalized,
    );
    report.info("pde-residual-median".into(), res.median_normalized);
    Ok(report)
}

pub fn suite_singularity(rc: &RunConfig) -> Result<Report> {
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let mut direction = vec![0.0; cfg.m()];
    direction[cfg.m() - 1] = 1.0;
    let target = -((cfg.m() as f64) - 2.0);
    let mut report = Report::new("singularity");
    for d in DeltaVector::all(cfg.n()) {
        let k = delta_to_index(&d);
        let slope = singularity_fit(&cfg, &x0, &direction, &d, rc.gamma)?;
        report.check(
            format!("singularity-slope-k{k}"),
            SLOPE_THRESHOLD,
            (slope - target).abs() / target.abs(),
        );
        report.info(format!("singularity-slope-value-k{k}"), slope);
    }
    Ok(report)
}

pub fn suite_boundary(rc: &RunConfig) -> Result<Report> {
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let mut report = Report::new("boundary");
    for j in 1..=cfg.n() {
        for d in DeltaVector::all(cfg.n()) {
            let k = delta_to_index(&d);
            let b = boundary_property_check(&cfg, &x0, &d, j, rc.gamma)?;
            if b.asserted {
                report.check(
                    format!("boundary-derivative-j{j}-k{k}"),
                    BOUNDARY_THRESHOLD,
                    b.extrapolated.abs() / b.reference.max(f64::MIN_POSITIVE),
                );
            } else {
                report.info(format!("boundary-value-j{j}-k{k}"), b.extrapolated);
            }
        }
    }
    Ok(report)
}

pub fn suite_identity(rc: &RunConfig) -> Result<Report> {
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let x: Vec<f64> = x0.iter().map(|v| v + 0.3).collect();
    let min_x = x
        .iter()
        .take(cfg.n())
        .fold(1.0f64, |acc, &v| acc.min(v))
        .min(1.0);
    let s = FDScheme::new(0.004 * min_x, 4)?;
    let fields: [(&str, SmoothField); 3] = [
        (
            "quadratic",
            Box::new(|p: &[f64]| {
                p.iter()
                    .enumerate()
                    .map(|(i, v)| (v - 0.1 * i as f64) * (v - 0.1 * i as f64))
                    .sum::<f64>()
                    + 1.0
            }),
        ),
        (
            "gaussian",
            Box::new(|p: &[f64]| {
                (-0.8 * p.iter().map(|v| (v - 0.4) * (v - 0.4)).sum::<f64>()).exp()
            }),
        ),
        (
            "trig",
            Box::new(|p: &[f64]| {
                2.0 + p
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (0.7 * v + 0.2 * i as f64).sin())
                    .sum::<f64>()
            }),
        ),
    ];
    let mut report = Report::new("identity");
    for (name, field) in &fields {
        for d in DeltaVector::all(cfg.n()) {
            let k = delta_to_index(&d);
            let r = constructive_identity_check(&cfg, &d, field.as_ref(), &x, s)?;
            report.check(
                format!("identity-{name}-k{k}"),
                IDENTITY_THRESHOLD,
                r.normalized_discrepancy,
            );
        }
    }
    Ok(report)
}

pub fn suite_decomposition(rc: &RunConfig) -> Result<Report> {
    let p = rc.lauricella_params()?;
    let n = p.n();
    let budget = if n <= 3 { 60 } else { 30 };
    let direct = fa_direct(&p, rc.tol, 150)?;
    let dec = fa_decomposed(&p, rc.tol, budget)?;
    let rec = fa_recurrence(&p, rc.tol, budget)?;
    let mut report = Report::new("decomposition");
    report.info("decomposition-value-direct".into(), direct.value);
    report.info("decomposition-value-decomposed".into(), dec.value);
    report.info("decomposition-value-recurrence".into(), rec.value);
    report.check(
        "decomposition-direct-vs-decomposed".into(),
        AGREEMENT_THRESHOLD,
        rel_diff(direct.value, dec.value),
    );
    report.check(
        "decomposition-direct-vs-recurrence".into(),
        AGREEMENT_THRESHOLD,
        rel_diff(direct.value, rec.value),
    );
    report.check(
        "decomposition-decomposed-vs-recurrence".into(),
        AGREEMENT_THRESHOLD,
        rel_diff(dec.value, rec.value),
    );
    Ok(report)
}

/// Run one suite by name; `all` concatenates every suite that the
/// configuration supports (decomposition only when a [lauricella] section is
/// present, singularity only when m > 2).
pub fn run_suite(name: &str, rc: &RunConfig) -> Result<Report> {
    match name {
        "pde" => suite_pde(rc),
        "singularity" => suite_singularity(rc),
        "boundary" => suite_boundary(rc),
        "identity" => suite_identity(rc),
        "decomposition" => suite_decomposition(rc),
        "all" => {
            let cfg = rc.problem_config()?;
            let mut report = Report::new("all");
            report.merge(suite_pde(rc)?);
            if cfg.m() > 2 {
                report.merge(suite_singularity(rc)?);
            }
            report.merge(suite_boundary(rc)?);
            report.merge(suite_identity(rc)?);
            if rc.lauricella.is_some() {
                report.merge(suite_decomposition(rc)?);
            }
            Ok(report)
        }
        other => Err(Error::Parameter(format!("unknown suite '{other}'"))),
    }
}
