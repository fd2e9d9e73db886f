//! Independent numerical verification tools: finite-difference application
//! of the operator, PDE residual suites over the fundamental solutions,
//! singularity-order regression, the boundary property, and the constructive
//! operator identity.
//!
//! Everything here deliberately avoids the analytic machinery of the other
//! modules (stencils and regressions only), so that agreement is evidence
//! rather than tautology.

use crate::error::{Error, Result};
use crate::fundsol::{evaluate_q, solution_params, DeltaVector, ProblemConfig};

/// Central-difference scheme: step and accuracy order (2 or 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDScheme {
    pub h: f64,
    pub order: usize,
}

impl FDScheme {
    pub fn new(h: f64, order: usize) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::Parameter(format!(
                "FD step must be positive, got {h}"
            )));
        }
        if order != 2 && order != 4 {
            return Err(Error::Parameter(format!(
                "FD order must be 2 or 4, got {order}"
            )));
        }
        Ok(FDScheme { h, order })
    }
}

/// Step-selection policy for residual suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FDPolicy {
    /// One scheme for every point.
    Fixed(FDScheme),
    /// Per-point step `h = rel_h * min(r, min_j x_j)`: the solution varies on
    /// scale `r` near the singularity and scale `x_j` near the boundary.
    Adaptive { rel_h: f64, order: usize },
}

impl Default for FDPolicy {
    fn default() -> Self {
        FDPolicy::Adaptive {
            rel_h: 1e-3,
            order: 4,
        }
    }
}

impl FDPolicy {
    fn resolve(&self, x: &[f64], x0: &[f64], n: usize) -> Result<FDScheme> {
        match *self {
            FDPolicy::Fixed(s) => Ok(s),
            FDPolicy::Adaptive { rel_h, order } => {
                if !(rel_h > 0.0 && rel_h < 0.1) {
                    return Err(Error::Parameter(format!(
                        "adaptive rel_h must lie in (0, 0.1), got {rel_h}"
                    )));
                }
                let r = x
                    .iter()
                    .zip(x0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let mut scale = r;
                for &xj in x.iter().take(n) {
                    scale = scale.min(xj);
                }
                FDScheme::new(rel_h * scale, order)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Operator application
// ---------------------------------------------------------------------------

fn second_derivative<F: Fn(&[f64]) -> f64>(u: &F, x: &[f64], axis: usize, s: FDScheme) -> f64 {
    let mut p = x.to_vec();
    let h = s.h;
    let at = |p: &mut Vec<f64>, v: f64| {
        p[axis] = v;
    };
    match s.order {
        2 => {
            at(&mut p, x[axis] + h);
            let up = u(&p);
            at(&mut p, x[axis] - h);
            let um = u(&p);
            (up - 2.0 * u(x) + um) / (h * h)
        }
        _ => {
            at(&mut p, x[axis] + 2.0 * h);
            let up2 = u(&p);
            at(&mut p, x[axis] + h);
            let up1 = u(&p);
            at(&mut p, x[axis] - h);
            let um1 = u(&p);
            at(&mut p, x[axis] - 2.0 * h);
            let um2 = u(&p);
            (-up2 + 16.0 * up1 - 30.0 * u(x) + 16.0 * um1 - um2) / (12.0 * h * h)
        }
    }
}

fn first_derivative<F: Fn(&[f64]) -> f64>(u: &F, x: &[f64], axis: usize, s: FDScheme) -> f64 {
    let mut p = x.to_vec();
    let h = s.h;
    match s.order {
        2 => {
            p[axis] = x[axis] + h;
            let up = u(&p);
            p[axis] = x[axis] - h;
            let um = u(&p);
            (up - um) / (2.0 * h)
        }
        _ => {
            p[axis] = x[axis] + 2.0 * h;
            let up2 = u(&p);
            p[axis] = x[axis] + h;
            let up1 = u(&p);
            p[axis] = x[axis] - h;
            let um1 = u(&p);
            p[axis] = x[axis] - 2.0 * h;
            let um2 = u(&p);
            (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h)
        }
    }
}

fn check_stencil(x: &[f64], n: usize, s: FDScheme) -> Result<()> {
    let reach = if s.order == 2 { s.h } else { 2.0 * s.h };
    for (j, &xj) in x.iter().take(n).enumerate() {
        if !(xj - reach > 0.0) {
            return Err(Error::Domain(format!(
                "FD stencil leaves the domain on singular axis {} (x = {xj}, reach = {reach})",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Finite-difference application of the operator
/// `L u = sum_i u_{x_i x_i} + sum_{j<=n} (2 alpha_j / x_j) u_{x_j}` at `x`.
pub fn apply_operator<F: Fn(&[f64]) -> f64>(
    u: F,
    x: &[f64],
    cfg: &ProblemConfig,
    s: FDScheme,
) -> Result<f64> {
    let two_alpha: Vec<f64> = cfg.alpha().iter().map(|a| 2.0 * a).collect();
    let (value, _) = operator_terms(&u, x, cfg.m(), &two_alpha, s)?;
    Ok(value)
}

/// Returns `(L u, sum of |term| magnitudes)` for an arbitrary first-order
/// coefficient vector (`coeff_j / x_j` multiplies `u_{x_j}`); the magnitude
/// sum normalizes residuals, and the free coefficients serve the mapped
/// operator of the constructive identity, whose `2 B_j` may leave `(0, 1)`.
fn operator_terms<F: Fn(&[f64]) -> f64>(
    u: &F,
    x: &[f64],
    m: usize,
    coeff: &[f64],
    s: FDScheme,
) -> Result<(f64, f64)> {
    if x.len() != m {
        return Err(Error::Domain(format!(
            "point has {} coordinates, operator expects {m}",
            x.len()
        )));
    }
    check_stencil(x, coeff.len(), s)?;
    let mut value = 0.0f64;
    let mut magnitude = 0.0f64;
    for i in 0..m {
        let d2 = second_derivative(u, x, i, s);
        value += d2;
        magnitude += d2.abs();
    }
    for (j, &c) in coeff.iter().enumerate() {
        let d1 = first_derivative(u, x, j, s);
        let term = c / x[j] * d1;
        value += term;
        magnitude += term.abs();
    }
    if !(value.is_finite() && magnitude.is_finite()) {
        return Err(Error::Domain(
            "field evaluation failed on the FD stencil".into(),
        ));
    }
    Ok((value, magnitude))
}

// ---------------------------------------------------------------------------
// Residual suite
// ---------------------------------------------------------------------------

/// One normalized PDE residual measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    /// Solution index `k` in `[1, 2^n]`.
    pub solution_index: usize,
    pub point_index: usize,
    /// `|L q| / (sum of |term| magnitudes)`.
    pub normalized: f64,
}

/// Aggregate residual report over all `2^n` solutions and all points.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_normalized: f64,
    pub median_normalized: f64,
    pub entries: Vec<ResidualEntry>,
}

/// Evaluate the normalized PDE residual of every fundamental solution at
/// every point. Points must keep `r >= 10 h` and `x_j >= 10 h`.
pub fn residual_suite(
    cfg: &ProblemConfig,
    x0: &[f64],
    points: &[Vec<f64>],
    policy: &FDPolicy,
    gamma: f64,
) -> Result<ResidualReport> {
    if points.is_empty() {
        return Err(Error::Domain(
            "residual suite needs at least one point".into(),
        ));
    }
    let mut entries = Vec::new();
    for (pi, x) in points.iter().enumerate() {
        let s = policy.resolve(x, x0, cfg.n())?;
        let r = x
            .iter()
            .zip(x0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if r < 10.0 * s.h {
            return Err(Error::Domain(format!(
                "point {pi} too close to the singularity: r = {r}, h = {}",
                s.h
            )));
        }
        for &xj in x.iter().take(cfg.n()) {
            if xj < 10.0 * s.h {
                return Err(Error::Domain(format!(
                    "point {pi} too close to the boundary: x_j = {xj}, h = {}",
                    s.h
                )));
            }
        }
        for d in DeltaVector::all(cfg.n()) {
            let k = crate::fundsol::delta_to_index(&d);
            let field = |p: &[f64]| -> f64 {
                evaluate_q(p, x0, cfg, &d, gamma, 1e-12)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            let two_alpha: Vec<f64> = cfg.alpha().iter().map(|a| 2.0 * a).collect();
            let (value, magnitude) = operator_terms(&field, x, cfg.m(), &two_alpha, s)?;
            entries.push(ResidualEntry {
                solution_index: k,
                point_index: pi,
                normalized: value.abs() / magnitude.max(f64::MIN_POSITIVE),
            });
        }
    }
    let mut sorted: Vec<f64> = entries.iter().map(|e| e.normalized).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    Ok(ResidualReport {
        max_normalized: *sorted.last().unwrap(),
        median_normalized: median,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Singularity order
// ---------------------------------------------------------------------------

/// Least-squares slope of `log |q_k(x0 + s e, x0)|` against `log s` over the
/// ladder `s = 2^-4 .. 2^-10`; for `m > 2` this estimates the singularity
/// order `-(m-2)`.
pub fn singularity_fit(
    cfg: &ProblemConfig,
    x0: &[f64],
    direction: &[f64],
    d: &DeltaVector,
    gamma: f64,
) -> Result<f64> {
    if cfg.m() <= 2 {
        return Err(Error::Domain("singularity order fit requires m > 2".into()));
    }
    if direction.len() != cfg.m() {
        return Err(Error::Domain(format!(
            "direction must have m = {} components",
            cfg.m()
        )));
    }
    let norm: f64 = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::Domain("direction must be nonzero".into()));
    }
    let e: Vec<f64> = direction.iter().map(|v| v / norm).collect();

    let mut logs = Vec::new();
    let mut logq = Vec::new();
    for j in 4..=10 {
        let s = 2f64.powi(-j);
        let x: Vec<f64> = x0.iter().zip(&e).map(|(x0i, ei)| x0i + s * ei).collect();
        let q = evaluate_q(&x, x0, cfg, d, gamma, 1e-11)?;
        if q.value == 0.0 {
            return Err(Error::Domain("q vanished on the fit ladder".into()));
        }
        logs.push(s.ln());
        logq.push(q.value.abs().ln());
    }
    let n = logs.len() as f64;
    let mean_s: f64 = logs.iter().sum::<f64>() / n;
    let mean_q: f64 = logq.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (ls, lq) in logs.iter().zip(&logq) {
        num += (ls - mean_s) * (lq - mean_q);
        den += (ls - mean_s) * (ls - mean_s);
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Richardson extrapolation
// ---------------------------------------------------------------------------

/// Extrapolate `v(x) -> limit` as `x -> 0` from samples on a halving ladder
/// `x_i = x_start * 2^-i` (coarsest first), assuming an expansion
/// `v(x) = limit + sum c_p x^p` over the given exponents. Each exponent is
/// eliminated in turn; the number of exponents must stay below the sample
/// count. Exponents may be negative (growing modes) but not zero.
pub fn richardson_extrapolate(values: &[f64], exponents: &[f64]) -> Result<f64> {
    if values.len() <= exponents.len() {
        return Err(Error::Parameter(format!(
            "richardson needs more samples ({}) than exponents ({})",
            values.len(),
            exponents.len()
        )));
    }
    for &p in exponents {
        if p.abs() < 1e-9 {
            return Err(Error::Parameter(
                "richardson exponents must be nonzero (zero mode is the limit itself)".into(),
            ));
        }
    }
    let mut v = values.to_vec();
    for &p in exponents {
        let f = 2f64.powf(-p);
        for i in 0..v.len() - 1 {
            v[i] = (v[i + 1] - f * v[i]) / (1.0 - f);
        }
        v.pop();
    }
    Ok(*v.last().unwrap())
}

// ---------------------------------------------------------------------------
// Boundary property
// ---------------------------------------------------------------------------

/// Result of the boundary-limit check on axis `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    /// The component `delta_j` of the chosen solution.
    pub delta_j: u8,
    /// Extrapolated limit as `x_j -> 0+`: of `dq/dx_j` when `delta_j = 1`,
    /// of `q` itself when `delta_j = 0`.
    pub extrapolated: f64,
    /// Reference magnitude of the same quantity at `x_j = 1/2`.
    pub reference: f64,
    /// Whether the vanishing of the limit is asserted by the theory
    /// (only the `delta_j = 1` derivative branch).
    pub asserted: bool,
    /// `(x_j, sampled quantity)` along the ladder.
    pub ladder: Vec<(f64, f64)>,
}

/// Check the boundary property on singular axis `j` (1-based):
/// for `delta_j = 1` the derivative `dq_k/dx_j` extrapolates to 0 as
/// `x_j -> 0+`; for `delta_j = 0` the value limit is reported (not
/// asserted). The probe point is `x0` shifted by 0.75 along the last axis,
/// with `x_j` then swept over `2^-3 .. 2^-10`.
pub fn boundary_property_check(
    cfg: &ProblemConfig,
    x0: &[f64],
    d: &DeltaVector,
    j: usize,
    gamma: f64,
) -> Result<BoundaryReport> {
    if j < 1 || j > cfg.n() {
        return Err(Error::Domain(format!(
            "axis j must lie in [1, n = {}], got {j}",
            cfg.n()
        )));
    }
    if d.len() != cfg.n() {
        return Err(Error::Parameter("delta length must equal n".into()));
    }
    let alpha_j = cfg.alpha()[j - 1];
    let delta_j = d.delta()[j - 1];
    let m = cfg.m();

    let mut probe = x0.to_vec();
    probe[m - 1] += 0.75;

    // Sampled quantity at a given x_j: FD derivative (delta_j = 1, order-4
    // stencil with h proportional to x_j so mode structure is preserved) or
    // the plain value (delta_j = 0).
    let sample = |xj: f64| -> Result<f64> {
        let mut x = probe.clone();
        x[j - 1] = xj;
        if delta_j == 1 {
            let h = 0.2 * xj;
            let mut v = 0.0;
            for (offset, w) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
                x[j - 1] = xj + offset * h;
                v += w * evaluate_q(&x, x0, cfg, d, gamma, 1e-12)?.value;
            }
            Ok(v / (12.0 * h))
        } else {
            Ok(evaluate_q(&x, x0, cfg, d, gamma, 1e-12)?.value)
        }
    };

    let mut ladder = Vec::new();
    let mut values = Vec::new();
    for i in 3..=10 {
        let xj = 2f64.powi(-i);
        let v = sample(xj)?;
        ladder.push((xj, v));
        values.push(v);
    }
    let reference = sample(0.5)?.abs();

    // Mode exponents of the sampled quantity as x_j -> 0: q is
    // x_j^{delta_j (1-2 alpha_j)} times a function analytic in x_j, so the
    // derivative carries exponents k - 2 alpha_j and the value carries
    // integers (delta_j = 0).
    let exponents: Vec<f64> = if delta_j == 1 {
        (0..4).map(|k| k as f64 - 2.0 * alpha_j).collect()
    } else {
        vec![1.0, 2.0, 3.0]
    };
    let extrapolated = richardson_extrapolate(&values, &exponents)?;

    Ok(BoundaryReport {
        delta_j,
        extrapolated,
        reference,
        asserted: delta_j == 1,
        ladder,
    })
}

// ---------------------------------------------------------------------------
// Constructive identity
// ---------------------------------------------------------------------------

/// Result of one constructive-identity evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// `L_alpha(prod_j x_j^{delta_j (1-2 alpha_j)} u)` by finite differences.
    pub lhs: f64,
    /// `prod_j x_j^{delta_j (1-2 alpha_j)} * L_mapped(u)` by finite
    /// differences, with mapped coefficients `2 B_j`.
    pub rhs: f64,
    /// `|lhs - rhs|` over the sum of both sides' term magnitudes.
    pub normalized_discrepancy: f64,
}

/// Check the operator identity
/// `L_alpha(prod x_j^{delta_j(1-2alpha_j)} u)
///  = prod x_j^{delta_j(1-2alpha_j)} L_B(u)`
/// at a point, where `B_j = alpha_j + (1-2alpha_j) delta_j` and `L_B` carries
/// first-order coefficients `2 B_j / x_j`.
pub fn constructive_identity_check<F: Fn(&[f64]) -> f64>(
    cfg: &ProblemConfig,
    d: &DeltaVector,
    u: F,
    x: &[f64],
    s: FDScheme,
) -> Result<IdentityReport> {
    let params = solution_params(cfg, d, 1.0)?;
    let n = cfg.n();
    let m = cfg.m();
    if x.len() != m {
        return Err(Error::Domain(format!(
            "point has {} coordinates, expected m = {m}",
            x.len()
        )));
    }
    let exps: Vec<f64> = (0..n)
        .map(|jj| d.delta()[jj] as f64 * (1.0 - 2.0 * cfg.alpha()[jj]))
        .collect();
    let prefactor = |p: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (jj, &e) in exps.iter().enumerate() {
            if e != 0.0 {
                acc += e * p[jj].ln();
            }
        }
        acc.exp()
    };

    let two_alpha: Vec<f64> = cfg.alpha().iter().map(|a| 2.0 * a).collect();
    let wrapped = |p: &[f64]| prefactor(p) * u(p);
    let (lhs, lhs_mag) = operator_terms(&wrapped, x, m, &two_alpha, s)?;

    let two_b: Vec<f64> = params.b_k.iter().map(|b| 2.0 * b).collect();
    let (rhs_core, rhs_mag) = operator_terms(&u, x, m, &two_b, s)?;
    let pf = prefactor(x);
    let rhs = pf * rhs_core;

    let scale = (lhs_mag + pf * rhs_mag).max(f64::MIN_POSITIVE);
    Ok(IdentityReport {
        lhs,
        rhs,
        normalized_discrepancy: (lhs - rhs).abs() / scale,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundsol::{evaluate_q_with, EvalPath, RadialExponent};

    fn scheme(h: f64, order: usize) -> FDScheme {
        FDScheme::new(h, order).unwrap()
    }

    #[test]
    fn scheme_validation() {
        assert!(FDScheme::new(1e-3, 4).is_ok());
        assert!(FDScheme::new(0.0, 4).is_err());
        assert!(FDScheme::new(1e-3, 3).is_err());
    }

    #[test]
    fn operator_annihilates_constants_exactly() {
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let v = apply_operator(|_| 1.0, &[0.7, 0.4, 0.2], &cfg, scheme(1e-3, 4)).unwrap();
        assert_eq!(v, 0.0);
        let v = apply_operator(|_| 1.0, &[0.7, 0.4, 0.2], &cfg, scheme(1e-3, 2)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn operator_annihilates_nonsingular_linear_field() {
        // u = x_2 with n = 1: pure Laplacian direction, no first-order term.
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let v = apply_operator(|p| p[1], &[0.7, 0.4, 0.2], &cfg, scheme(1e-3, 4)).unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn operator_annihilates_bessel_kernel() {
        // u = x_1^{1-2alpha} solves u'' + (2 alpha / x_1) u' = 0.
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let u = |p: &[f64]| p[0].powf(1.0 - 2.0 * 0.3);
        let x = [0.7, 0.4, 0.2];
        let v4 = apply_operator(u, &x, &cfg, scheme(1e-4, 4)).unwrap();
        assert!(v4.abs() < 1e-6, "order 4 residual {v4}");
        let v2 = apply_operator(u, &x, &cfg, scheme(1e-4, 2)).unwrap();
        assert!(v2.abs() < 1e-3, "order 2 residual {v2}");
        // All-delta product solution for n = 2.
        let cfg = ProblemConfig::new(3, 2, vec![0.2, 0.35]).unwrap();
        let u = |p: &[f64]| p[0].powf(0.6) * p[1].powf(0.3);
        let v = apply_operator(u, &[0.8, 0.6, 0.3], &cfg, scheme(1e-4, 4)).unwrap();
        assert!(v.abs() < 1e-6, "product solution residual {v}");
    }

    #[test]
    fn operator_rejects_stencil_outside_domain() {
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        // x_1 = 1.5e-3 with h = 1e-3, order 4: reach 2h = 2e-3 > x_1.
        assert!(matches!(
            apply_operator(|_| 1.0, &[1.5e-3, 0.4, 0.2], &cfg, scheme(1e-3, 4)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fd_error_scales_with_order() {
        // Smooth non-solution: error(h) ~ C h^order, so successive
        // differences contract by 2^order.
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let u = |p: &[f64]| (p[0] * 1.3).sin() * (p[1] - 0.2).cos() + p[2] * p[2] * p[0];
        let x = [0.9, 0.5, 0.4];
        for order in [2usize, 4] {
            let h0 = 0.04;
            let d0 = apply_operator(u, &x, &cfg, scheme(h0, order)).unwrap();
            let d1 = apply_operator(u, &x, &cfg, scheme(h0 / 2.0, order)).unwrap();
            let d2 = apply_operator(u, &x, &cfg, scheme(h0 / 4.0, order)).unwrap();
            let ratio = (d0 - d1) / (d1 - d2);
            let expect = 2f64.powi(order as i32);
            assert!(
                (ratio / expect - 1.0).abs() < 0.25,
                "order {order}: contraction ratio {ratio}, expected ~{expect}"
            );
        }
    }

    #[test]
    fn residual_suite_spec_examples() {
        // n=0, m=3: u = 1/r is the exact kernel. (Points with equal offsets
        // |x_i - x0_i| on every axis are avoided: there each u_{x_i x_i}
        // vanishes individually and the term-magnitude normalization
        // degenerates to FD noise over FD noise.)
        let cfg = ProblemConfig::new(3, 0, vec![]).unwrap();
        let x0 = vec![0.2, -0.1, 0.4];
        let points = vec![vec![0.9, 0.3, -0.2], vec![0.9, 0.6, 1.2]];
        let policy = FDPolicy::Fixed(scheme(1e-4, 4));
        let rep = residual_suite(&cfg, &x0, &points, &policy, 1.0).unwrap();
        assert!(rep.max_normalized <= 1e-6, "n=0 max {}", rep.max_normalized);

        // m=3, n=1 example point.
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![1.0, 0.5, 0.5];
        let points = vec![vec![1.3, 0.7, 0.4]];
        let rep = residual_suite(&cfg, &x0, &points, &policy, 1.0).unwrap();
        assert!(
            rep.max_normalized <= 1e-5,
            "m3 n1 max {}",
            rep.max_normalized
        );
        assert_eq!(rep.entries.len(), 2);

        // m=2, n=2: all four solutions, points in the direct-series regime
        // (noise of the deep transformed path, ~1e-11 of |q|, divided by the
        // adaptive h^2 would exceed the threshold).
        let cfg = ProblemConfig::new(2, 2, vec![0.2, 0.3]).unwrap();
        let x0 = vec![0.1, 0.12];
        let points = vec![vec![1.1, 1.3], vec![1.4, 0.9]];
        let rep = residual_suite(&cfg, &x0, &points, &FDPolicy::default(), 1.0).unwrap();
        assert_eq!(rep.entries.len(), 8);
        assert!(
            rep.max_normalized <= 1e-5,
            "m2 n2 max {}",
            rep.max_normalized
        );
    }

    #[test]
    fn residual_suite_rejects_close_points() {
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![1.0, 0.5, 0.5];
        let policy = FDPolicy::Fixed(scheme(1e-2, 4));
        // r = 0.05 < 10 h = 0.1.
        let points = vec![vec![1.0, 0.5, 0.55]];
        assert!(matches!(
            residual_suite(&cfg, &x0, &points, &policy, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shifted_exponent_satisfies_pde_compact_does_not() {
        // The arbiter test for the radial-exponent convention: with delta=1
        // the shifted form passes the residual check and the compact form
        // fails it by orders of magnitude.
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![1.0, 0.5, 0.5];
        let x = [1.3, 0.7, 0.4];
        let d = DeltaVector::ones(1);
        let s = scheme(1e-4, 4);
        let two_alpha = [0.5];
        let field_shifted = |p: &[f64]| {
            evaluate_q_with(p, &x0, &cfg, &d, 1.0, 1e-12, RadialExponent::Shifted, None)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        };
        let field_compact = |p: &[f64]| {
            evaluate_q_with(p, &x0, &cfg, &d, 1.0, 1e-12, RadialExponent::Compact, None)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        };
        let (shifted, mag_s) = operator_terms(&field_shifted, &x, 3, &two_alpha, s).unwrap();
        let (compact, mag_c) = operator_terms(&field_compact, &x, 3, &two_alpha, s).unwrap();
        let shifted_norm = shifted.abs() / mag_s;
        let compact_norm = compact.abs() / mag_c;
        assert!(shifted_norm < 1e-6, "shifted residual {shifted_norm}");
        assert!(compact_norm > 1e-3, "compact residual {compact_norm}");
    }

    #[test]
    fn singularity_fit_newtonian_exact() {
        // n=0: q ~ r^{2-m} exactly, slope recovered to high accuracy.
        let cfg = ProblemConfig::new(5, 0, vec![]).unwrap();
        let x0 = vec![0.4, 0.1, -0.3, 0.8, 0.0];
        let dir = vec![1.0, 1.0, -1.0, 0.5, 2.0];
        let slope = singularity_fit(&cfg, &x0, &dir, &DeltaVector::zeros(0), 1.0).unwrap();
        assert!((slope + 3.0).abs() < 1e-3 * 3.0, "slope {slope}");
    }

    #[test]
    fn singularity_fit_m3_n1() {
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![0.9, 0.6, 0.4];
        let dir = vec![0.3, 1.0, -0.5];
        for d in DeltaVector::all(1) {
            let slope = singularity_fit(&cfg, &x0, &dir, &d, 1.0).unwrap();
            assert!(
                (slope + 1.0).abs() < 0.01,
                "slope {slope} for delta {:?}",
                d.delta()
            );
        }
    }

    #[test]
    fn singularity_fit_requires_m_above_two() {
        let cfg = ProblemConfig::new(2, 1, vec![0.25]).unwrap();
        assert!(matches!(
            singularity_fit(&cfg, &[0.5, 0.5], &[1.0, 0.0], &DeltaVector::zeros(1), 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn richardson_recovers_synthetic_limit() {
        // v(x) = 3 + 2 x^0.6 - x^2 on a halving ladder.
        let values: Vec<f64> = (0..8)
            .map(|i| {
                let x = 0.25 * 2f64.powi(-i);
                3.0 + 2.0 * x.powf(0.6) - x * x
            })
            .collect();
        let lim = richardson_extrapolate(&values, &[0.6, 2.0]).unwrap();
        assert!((lim - 3.0).abs() < 1e-9, "limit {lim}");
    }

    #[test]
    fn richardson_is_not_vacuous() {
        // A constant (nonzero-limit) ladder extrapolates to the constant, so
        // a boundary check asserting "limit = 0" genuinely discriminates.
        let values = vec![1.0; 8];
        let lim = richardson_extrapolate(&values, &[0.5, 1.0, 2.0]).unwrap();
        assert!((lim - 1.0).abs() < 1e-12);
        // Growing-mode elimination works too: v = 5 + x^{-0.5}.
        let values: Vec<f64> = (0..8)
            .map(|i| {
                let x = 0.25 * 2f64.powi(-i);
                5.0 + x.powf(-0.5)
            })
            .collect();
        let lim = richardson_extrapolate(&values, &[-0.5]).unwrap();
        assert!((lim - 5.0).abs() < 1e-9, "limit {lim}");
    }

    #[test]
    fn richardson_validates_inputs() {
        assert!(richardson_extrapolate(&[1.0, 2.0], &[0.5, 1.0]).is_err());
        assert!(richardson_extrapolate(&[1.0, 2.0, 3.0], &[0.0]).is_err());
    }

    #[test]
    fn boundary_derivative_vanishes_for_delta_one() {
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![0.8, 0.5, 0.5];
        let rep = boundary_property_check(&cfg, &x0, &DeltaVector::ones(1), 1, 1.0).unwrap();
        assert!(rep.asserted);
        assert!(
            rep.extrapolated.abs() <= 1e-3 * rep.reference,
            "extrapolated {} vs reference {}",
            rep.extrapolated,
            rep.reference
        );
    }

    #[test]
    fn boundary_value_branch_reports_without_asserting() {
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        let x0 = vec![0.8, 0.5, 0.5];
        let rep = boundary_property_check(&cfg, &x0, &DeltaVector::zeros(1), 1, 1.0).unwrap();
        assert!(!rep.asserted);
        assert_eq!(rep.ladder.len(), 8);
        // q_1 does not vanish at the boundary; the observed limit is
        // genuinely nonzero, which is why this branch is report-only.
        assert!(rep.extrapolated.abs() > 1e-3 * rep.reference);
    }

    #[test]
    fn boundary_check_validates_axis() {
        let cfg = ProblemConfig::new(3, 1, vec![0.25]).unwrap();
        assert!(
            boundary_property_check(&cfg, &[0.8, 0.5, 0.5], &DeltaVector::ones(1), 2, 1.0).is_err()
        );
    }

    #[test]
    fn constructive_identity_trivial_and_smooth_fields() {
        let s = scheme(1e-4, 4);
        // delta = 0: both sides are literally the same computation.
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let rep = constructive_identity_check(
            &cfg,
            &DeltaVector::zeros(1),
            |p| p[0] * p[0] + p[1],
            &[0.7, 0.4, 0.3],
            s,
        )
        .unwrap();
        assert_eq!(rep.normalized_discrepancy, 0.0);

        // delta = 1, u = x1^2 + x2.
        let rep = constructive_identity_check(
            &cfg,
            &DeltaVector::ones(1),
            |p| p[0] * p[0] + p[1],
            &[0.7, 0.4, 0.3],
            s,
        )
        .unwrap();
        assert!(
            rep.normalized_discrepancy < 1e-7,
            "discrepancy {}",
            rep.normalized_discrepancy
        );

        // u = 1: rhs core is exactly 0; lhs is the product solution.
        let rep =
            constructive_identity_check(&cfg, &DeltaVector::ones(1), |_| 1.0, &[0.7, 0.4, 0.3], s)
                .unwrap();
        assert!(
            rep.normalized_discrepancy < 1e-6,
            "discrepancy {}",
            rep.normalized_discrepancy
        );

        // n = 2 with mixed delta and a Gaussian bump.
        let cfg = ProblemConfig::new(3, 2, vec![0.2, 0.35]).unwrap();
        let d = DeltaVector::new(vec![1, 0]).unwrap();
        let u = |p: &[f64]| (-((p[0] - 0.9).powi(2) + (p[1] - 0.6).powi(2) + p[2] * p[2])).exp();
        let rep = constructive_identity_check(&cfg, &d, u, &[0.8, 0.7, 0.2], s).unwrap();
        assert!(
            rep.normalized_discrepancy < 1e-6,
            "discrepancy {}",
            rep.normalized_discrepancy
        );
    }

    #[test]
    fn transformed_path_residual_n1() {
        // Direct PDE residual coverage of the transformed representation:
        // force it at a point where the direct path would normally be used.
        let cfg = ProblemConfig::new(3, 1, vec![0.3]).unwrap();
        let x0 = vec![0.4, 0.5, 0.5];
        let x = [0.45, 0.55, 0.48];
        let s = scheme(1e-5, 4);
        for d in DeltaVector::all(1) {
            let field = |p: &[f64]| {
                evaluate_q_with(
                    p,
                    &x0,
                    &cfg,
                    &d,
                    1.0,
                    1e-13,
                    RadialExponent::Shifted,
                    Some(EvalPath::Transformed),
                )
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
            };
            let (v, mag) = operator_terms(&field, &x, 3, &[0.6], s).unwrap();
            let norm = v.abs() / mag;
            assert!(
                norm < 1e-5,
                "transformed residual {norm} delta {:?}",
                d.delta()
            );
        }
    }
}
