//! Scalar special functions: log-gamma, digamma, Pochhammer symbol, and the
//! Gauss hypergeometric function `2F1` with the transformations needed by the
//! rest of the crate.
//!
//! The public `2F1` surface keeps the series domain `|x| < 1`. Internally the
//! crate also evaluates arguments exponentially close to 1 (needed by the
//! near-singularity path of the fundamental solutions); that machinery lives
//! here as crate-private helpers built on the `z -> 1-z` linear
//! transformation and its integer-parameter logarithmic limit forms.

use crate::error::{Error, Result};
use crate::eval::EvalResult;

/// Hard cap on the number of series terms for a single `2F1` summation.
pub const MAX_2F1_TERMS: usize = 1_000_000;

/// Number of consecutive below-tolerance terms required to stop a series.
const STOP_RUN: usize = 3;

/// Arguments `x > 1 - NEAR_ONE_WINDOW` are summed via the `z -> 1-z`
/// transformation instead of the direct series.
const NEAR_ONE_WINDOW: f64 = 1.0 / 128.0;

/// `c - a - b` closer to an integer than this (but not within
/// [`INTEGER_SNAP`]) falls back to the direct series: both branches of the
/// linear transformation would lose ~`1/|c-a-b-m|` digits to cancellation.
const NEAR_INTEGER_GUARD: f64 = 1e-3;

/// `c - a - b` within this distance of an integer is treated as exactly
/// integral and routed to the logarithmic limit formulas.
const INTEGER_SNAP: f64 = 1e-12;

/// Gauss hypergeometric parameter triple `(a, b, c)`.
///
/// Invariant: `c` must not be zero or a negative integer, otherwise the
/// series is undefined; constructors of consuming routines check this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GaussParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        GaussParams { a, b, c }
    }

    fn validate(&self) -> Result<()> {
        if is_nonpositive_integer(self.c) {
            return Err(Error::Parameter(format!(
                "c = {} is zero or a negative integer; 2F1 is undefined",
                self.c
            )));
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::Parameter("non-finite 2F1 parameter".into()));
        }
        Ok(())
    }
}

/// True when `v` is exactly `0, -1, -2, ...` in floating point.
pub(crate) fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

// ---------------------------------------------------------------------------
// Gamma machinery
// ---------------------------------------------------------------------------

/// Lanczos approximation, g = 7, 9 terms. Relative accuracy of the resulting
/// Gamma value is ~1e-15 over the positive axis.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(z: f64) -> f64 {
    // Valid for z >= 0.5.
    let mut x = LANCZOS_COEF[0];
    for (i, &coef) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += coef / (z - 1.0 + i as f64);
    }
    let t = z + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z - 0.5) * t.ln() - t + x.ln()
}

/// Natural log of the Gamma function for positive real arguments.
///
/// Relative error is below `1e-13` on `[0.1, 50]` (and in practice over the
/// whole positive axis until `ln Gamma` itself overflows).
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires z > 0, got {z}")));
    }
    if z < 0.5 {
        // Reflection keeps the Lanczos kernel on z >= 0.5.
        let (lg, _) = ln_gamma_signed(z);
        Ok(lg)
    } else {
        Ok(ln_gamma_lanczos(z))
    }
}

/// `(ln |Gamma(z)|, sign of Gamma(z))` for any real `z` that is not a pole.
///
/// Returns `sign = 0.0` at poles (non-positive integers); callers treat that
/// as "coefficient vanishes" (`1/Gamma = 0`).
pub(crate) fn ln_gamma_signed(z: f64) -> (f64, f64) {
    if z >= 0.5 {
        return (ln_gamma_lanczos(z), 1.0);
    }
    if is_nonpositive_integer(z) {
        return (f64::INFINITY, 0.0);
    }
    // Gamma(z) = pi / (sin(pi z) * Gamma(1 - z)).
    let s = sin_pi(z);
    let lg = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - z);
    (lg, s.signum())
}

/// `sin(pi x)` computed after range reduction on `x` itself, so that the
/// result is accurate (and exactly zero) near large integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1], x = 2k + r exactly
    (std::f64::consts::PI * r).sin()
}

/// Digamma function for real non-pole arguments.
pub(crate) fn digamma(z: f64) -> f64 {
    if z <= 0.0 {
        if is_nonpositive_integer(z) {
            return f64::NAN;
        }
        // psi(z) = psi(1 - z) - pi * cot(pi * z)
        let r = z - z.floor();
        let cot = (std::f64::consts::PI * r).cos() / (std::f64::consts::PI * r).sin();
        return digamma(1.0 - z) - std::f64::consts::PI * cot;
    }
    let mut acc = 0.0;
    let mut x = z;
    while x < 8.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series with Bernoulli numbers B_2..B_14.
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 120.0
                    + inv2
                        * (1.0 / 252.0
                            + inv2
                                * (-1.0 / 240.0
                                    + inv2
                                        * (1.0 / 132.0
                                            + inv2 * (-691.0 / 32760.0 + inv2 * (1.0 / 12.0)))))));
    acc + x.ln() - 0.5 * inv - series
}

/// Pochhammer symbol `(kappa)_nu = kappa (kappa+1) ... (kappa+nu-1)`, with
/// `(kappa)_0 = 1` for every `kappa`.
pub fn pochhammer(kappa: f64, nu: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..nu {
        acc *= kappa + i as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// 2F1: raw series
// ---------------------------------------------------------------------------

/// Direct power-series summation of `2F1(a, b; c; x)`.
///
/// This is the raw kernel: no transformations are applied, so convergence
/// degrades as `|x| -> 1`. The stopping rule is `|term| <= tol * |partial|`
/// for three consecutive terms, capped at [`MAX_2F1_TERMS`]. Exposed publicly
/// so that transformation identities can be cross-checked against an
/// evaluator that provably does not use them.
pub fn gauss_2f1_series(p: GaussParams, x: f64, tol: f64) -> Result<EvalResult> {
    p.validate()?;
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "2F1 series requires |x| < 1, got x = {x}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut small_run = 0usize;
    let mut k = 0usize;
    while k < MAX_2F1_TERMS {
        let kf = k as f64;
        term *= (p.a + kf) * (p.b + kf) / ((p.c + kf) * (kf + 1.0)) * x;
        sum += term;
        k += 1;
        if term == 0.0 {
            // Terminating (polynomial) case: the recurrence annihilates all
            // later terms at once.
            return Ok(EvalResult {
                value: sum,
                error_estimate: 0.0,
                terms_used: k + 1,
                converged: true,
                beyond_direct_domain: false,
            });
        }
        if term.abs() <= tol * sum.abs() {
            small_run += 1;
            if small_run >= STOP_RUN {
                let tail = term.abs() * x.abs() / (1.0 - x.abs());
                return Ok(EvalResult {
                    value: sum,
                    error_estimate: term.abs().max(tail),
                    terms_used: k + 1,
                    converged: true,
                    beyond_direct_domain: false,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Ok(EvalResult {
        value: sum,
        error_estimate: term.abs().max(term.abs() * x.abs() / (1.0 - x.abs())),
        terms_used: MAX_2F1_TERMS + 1,
        converged: false,
        beyond_direct_domain: false,
    })
}

// ---------------------------------------------------------------------------
// 2F1: transformations and router
// ---------------------------------------------------------------------------

/// The autotransformation (Pfaff) `F(a,b;c;x) = (1-x)^(-b) F(c-a,b;c;x/(x-1))`.
///
/// Returns the transformed parameters, the transformed argument, and the
/// prefactor, such that `prefactor * F(params', x') = F(params, x)`.
pub fn pfaff_transform(p: GaussParams, x: f64) -> Result<(GaussParams, f64, f64)> {
    p.validate()?;
    if !(x < 1.0) {
        return Err(Error::Domain(format!(
            "Pfaff transformation requires x < 1, got {x}"
        )));
    }
    let transformed = GaussParams::new(p.c - p.a, p.b, p.c);
    let arg = x / (x - 1.0);
    let prefactor = (1.0 - x).powf(-p.b);
    Ok((transformed, arg, prefactor))
}

/// `2F1(a, b; c; 1)` by the Gauss summation theorem
/// `Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))`, requiring `c-a-b > 0`.
pub fn gauss_2f1_at_one(p: GaussParams) -> Result<f64> {
    p.validate()?;
    let kappa = p.c - p.a - p.b;
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "2F1 at x=1 requires c-a-b > 0, got {kappa}"
        )));
    }
    let (lg_c, s_c) = ln_gamma_signed(p.c);
    let (lg_k, s_k) = ln_gamma_signed(kappa);
    let (lg_ca, s_ca) = ln_gamma_signed(p.c - p.a);
    let (lg_cb, s_cb) = ln_gamma_signed(p.c - p.b);
    if s_ca == 0.0 || s_cb == 0.0 {
        // Pole of a denominator Gamma: the quotient vanishes.
        return Ok(0.0);
    }
    let sign = s_c * s_k * s_ca * s_cb;
    Ok(sign * (lg_c + lg_k - lg_ca - lg_cb).exp())
}

/// Full-service `2F1(a, b; c; x)` for `|x| < 1`.
///
/// Routing: terminating parameter (a or b a non-positive integer) goes to the
/// exact polynomial; `x < -1/2` applies the Pfaff transformation first
/// (argument mapped into `(1/3, 1/2)`); `x > 1 - 2^-7` uses the `z -> 1-z`
/// linear transformation (with the logarithmic limit form when `c-a-b` is an
/// integer); everything else is the direct series.
pub fn gauss_2f1(p: GaussParams, x: f64, tol: f64) -> Result<EvalResult> {
    p.validate()?;
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("2F1 requires |x| < 1, got x = {x}")));
    }
    if is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b) {
        return gauss_2f1_series(p, x, tol);
    }
    if x < -0.5 {
        let (q, arg, prefactor) = pfaff_transform(p, x)?;
        return Ok(gauss_2f1_series(q, arg, tol)?.scaled(prefactor));
    }
    if x > 1.0 - NEAR_ONE_WINDOW {
        return gauss_2f1_near_one(p, 1.0 - x, tol);
    }
    gauss_2f1_series(p, x, tol)
}

/// `2F1(a, b; c; 1 - w)` for small `w > 0` via the linear transformation.
/// Crate-private: the public router guards its domain.
pub(crate) fn gauss_2f1_near_one(p: GaussParams, w: f64, tol: f64) -> Result<EvalResult> {
    debug_assert!(w > 0.0 && w < 1.0);
    let kappa = p.c - p.a - p.b;
    let nearest = kappa.round();
    let dist = (kappa - nearest).abs();
    if dist <= INTEGER_SNAP && nearest >= 0.0 {
        return gauss_2f1_log_case(p, nearest as u32, w, tol);
    }
    if dist < NEAR_INTEGER_GUARD {
        // Too close to an integer for the two-branch form (catastrophic
        // cancellation), not close enough to snap: fall back to the series.
        return gauss_2f1_series(p, 1.0 - w, tol);
    }

    // F(a,b;c;1-w) = C1 * F(a, b; a+b-c+1; w)
    //             + C2 * w^kappa * F(c-a, c-b; c-a-b+1; w)
    let (lg_c, s_c) = ln_gamma_signed(p.c);
    let (lg_k, s_k) = ln_gamma_signed(kappa);
    let (lg_mk, s_mk) = ln_gamma_signed(-kappa);
    let (lg_ca, s_ca) = ln_gamma_signed(p.c - p.a);
    let (lg_cb, s_cb) = ln_gamma_signed(p.c - p.b);
    let (lg_a, s_a) = ln_gamma_signed(p.a);
    let (lg_b, s_b) = ln_gamma_signed(p.b);

    let c1 = if s_ca == 0.0 || s_cb == 0.0 {
        0.0
    } else {
        s_c * s_k * s_ca * s_cb * (lg_c + lg_k - lg_ca - lg_cb).exp()
    };
    let c2 = if s_a == 0.0 || s_b == 0.0 {
        0.0
    } else {
        s_c * s_mk * s_a * s_b * (lg_c + lg_mk - lg_a - lg_b).exp()
    };

    let inner_tol = tol.min(1e-16);
    let f1 = gauss_2f1_series(GaussParams::new(p.a, p.b, 1.0 - kappa), w, inner_tol)?;
    let f2 = gauss_2f1_series(
        GaussParams::new(p.c - p.a, p.c - p.b, 1.0 + kappa),
        w,
        inner_tol,
    )?;
    let wk = (kappa * w.ln()).exp();
    let value = c1 * f1.value + c2 * wk * f2.value;
    Ok(EvalResult {
        value,
        error_estimate: c1.abs() * f1.error_estimate + (c2 * wk).abs() * f2.error_estimate,
        terms_used: f1.terms_used + f2.terms_used,
        converged: f1.converged && f2.converged,
        beyond_direct_domain: false,
    })
}

/// Logarithmic limit forms of the `z -> 1-z` transformation for
/// `c = a + b + m0` with integer `m0 >= 0`, evaluated at argument `1 - w`.
fn gauss_2f1_log_case(p: GaussParams, m0: u32, w: f64, tol: f64) -> Result<EvalResult> {
    let a = p.a;
    let b = p.b;
    let ln_w = w.ln();
    let (lg_a, s_a) = ln_gamma_signed(a);
    let (lg_b, s_b) = ln_gamma_signed(b);
    let (lg_c, s_c) = ln_gamma_signed(p.c);

    if m0 == 0 {
        // F(a,b;a+b;1-w) = G * sum_n (a)_n (b)_n / (n!)^2
        //                  * [2 psi(n+1) - psi(a+n) - psi(b+n) - ln w] w^n
        let g = if s_a == 0.0 || s_b == 0.0 {
            0.0
        } else {
            s_c * s_a * s_b * (lg_c - lg_a - lg_b).exp()
        };
        let mut term = 1.0f64;
        let mut psi_n1 = -0.577_215_664_901_532_9; // psi(1)
        let mut psi_an = digamma(a);
        let mut psi_bn = digamma(b);
        let mut sum = 0.0f64;
        let mut small_run = 0usize;
        let mut n = 0usize;
        loop {
            let bracket = 2.0 * psi_n1 - psi_an - psi_bn - ln_w;
            let contrib = term * bracket;
            sum += contrib;
            if contrib.abs() <= tol * sum.abs() {
                small_run += 1;
                if small_run >= STOP_RUN {
                    break;
                }
            } else {
                small_run = 0;
            }
            if n >= MAX_2F1_TERMS {
                return Ok(EvalResult {
                    value: g * sum,
                    error_estimate: (g * contrib).abs(),
                    terms_used: n + 1,
                    converged: false,
                    beyond_direct_domain: false,
                });
            }
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0)) * w;
            psi_n1 += 1.0 / (nf + 1.0);
            psi_an += 1.0 / (a + nf);
            psi_bn += 1.0 / (b + nf);
            n += 1;
        }
        return Ok(EvalResult {
            value: g * sum,
            error_estimate: (g * term).abs().max(f64::EPSILON * (g * sum).abs()),
            terms_used: n + 1,
            converged: true,
            beyond_direct_domain: false,
        });
    }

    // m0 >= 1:
    // F = G1 * sum_{n=0}^{m0-1} (a)_n (b)_n / (n! (1-m0)_n) w^n
    //   - (-1)^m0 * G2 * w^m0 * sum_{n>=0} (a+m0)_n (b+m0)_n / (n! (n+m0)!)
    //       * [ln w - psi(n+1) - psi(n+m0+1) + psi(a+m0+n) + psi(b+m0+n)] w^n
    let m = m0 as f64;
    let (lg_am, s_am) = ln_gamma_signed(a + m);
    let (lg_bm, s_bm) = ln_gamma_signed(b + m);
    let (lg_m, _) = ln_gamma_signed(m);
    let g1 = if s_am == 0.0 || s_bm == 0.0 {
        0.0
    } else {
        s_c * s_am * s_bm * (lg_m + lg_c - lg_am - lg_bm).exp()
    };
    let mut finite = 0.0f64;
    let mut term = 1.0f64;
    for n in 0..m0 {
        finite += term;
        let nf = n as f64;
        // (1-m0)_n factor sits in the denominator; it is nonzero for n < m0.
        term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - m + nf)) * w;
    }
    let part1 = g1 * finite;

    let g2 = if s_a == 0.0 || s_b == 0.0 {
        0.0
    } else {
        s_c * s_a * s_b * (lg_c - lg_a - lg_b).exp()
    };
    let sign = if m0.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut psi_n1 = -0.577_215_664_901_532_9; // psi(1)
    let mut psi_nm = digamma(m + 1.0);
    let mut psi_am = digamma(a + m);
    let mut psi_bm = digamma(b + m);
    // term_n = (a+m0)_n (b+m0)_n / (n! (n+m0)!) w^n, starting at 1/m0!.
    let mut term = (-ln_gamma_signed(m + 1.0).0).exp();
    let mut sum = 0.0f64;
    let mut small_run = 0usize;
    let mut n = 0usize;
    let (tail, converged) = loop {
        let bracket = ln_w - psi_n1 - psi_nm + psi_am + psi_bm;
        let contrib = term * bracket;
        sum += contrib;
        if contrib.abs() <= tol * (sum.abs() + part1.abs() / g2.abs().max(f64::MIN_POSITIVE)) {
            small_run += 1;
            if small_run >= STOP_RUN {
                break (contrib.abs(), true);
            }
        } else {
            small_run = 0;
        }
        if n >= MAX_2F1_TERMS {
            break (contrib.abs(), false);
        }
        let nf = n as f64;
        term *= (a + m + nf) * (b + m + nf) / ((nf + 1.0) * (nf + 1.0 + m)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm += 1.0 / (nf + 1.0 + m);
        psi_am += 1.0 / (a + m + nf);
        psi_bm += 1.0 / (b + m + nf);
        n += 1;
    };
    let wm = (m * ln_w).exp();
    let value = part1 - sign * g2 * wm * sum;
    Ok(EvalResult {
        value,
        error_estimate: (g2 * wm * tail).abs() + f64::EPSILON * part1.abs(),
        terms_used: m0 as usize + n + 1,
        converged,
        beyond_direct_domain: false,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
