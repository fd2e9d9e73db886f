//! Three independent evaluators for the Lauricella hypergeometric function
//! `F_A^(n)`:
//!
//! * [`fa_direct`] — the defining n-fold power series, summed by total-degree
//!   shells (valid for `|x_1| + ... + |x_n| < 1`);
//! * [`fa_decomposed`] — the closed-form decomposition into products of Gauss
//!   `2F1` factors indexed by triangular multi-index grids;
//! * [`fa_recurrence`] — a dimension-reducing recurrence, kept purely as a
//!   cross-check oracle.
//!
//! Agreement of the three on overlapping domains is the crate's main
//! correctness evidence for the decomposition.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::eval::EvalResult;
use crate::multiindex::{enumerate_grids, m_count, n_count};
use crate::special::{gauss_2f1, pochhammer, GaussParams};

/// Hard cap on total degree for any F_A evaluator: beyond this, raw
/// Pochhammer factors overflow `f64` range.
pub const FA_MAX_TOTAL_DEGREE: u32 = 150;

/// Number of consecutive small degree-shells required to stop.
const STOP_SHELLS: usize = 2;

/// Tolerance used for the inner Gauss factors of the decomposition and the
/// recurrence (memoized, so tight tolerance is cheap).
const INNER_GAUSS_TOL: f64 = 1e-15;

/// Default truncation degree: generous for small `n`, tighter for large `n`
/// where the grid count grows combinatorially.
pub fn default_max_total_degree(n: usize) -> u32 {
    if n <= 3 {
        24
    } else {
        16
    }
}

/// Parameter bundle `(a; b_1..b_n; c_1..c_n; x_1..x_n)` for `F_A^(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LauricellaParams {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub x: Vec<f64>,
}

impl LauricellaParams {
    pub fn new(a: f64, b: Vec<f64>, c: Vec<f64>, x: Vec<f64>) -> Self {
        LauricellaParams { a, b, c, x }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.b.len();
        if n < 1 {
            return Err(Error::Parameter("F_A requires n >= 1".into()));
        }
        if self.c.len() != n || self.x.len() != n {
            return Err(Error::Parameter(format!(
                "parameter lists must share one length: b has {}, c has {}, x has {}",
                n,
                self.c.len(),
                self.x.len()
            )));
        }
        for &ci in &self.c {
            if crate::special::is_nonpositive_integer(ci) {
                return Err(Error::Parameter(format!(
                    "c = {ci} is zero or a negative integer; F_A is undefined"
                )));
            }
        }
        let all = self
            .b
            .iter()
            .chain(&self.c)
            .chain(&self.x)
            .chain(std::iter::once(&self.a));
        for &v in all {
            if !v.is_finite() {
                return Err(Error::Parameter("non-finite F_A parameter".into()));
            }
        }
        Ok(())
    }

    fn sum_abs_x(&self) -> f64 {
        self.x.iter().map(|v| v.abs()).sum()
    }
}

fn validate_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    Ok(())
}

/// Shared shell-stopping bookkeeping: returns the geometric tail estimate for
/// the last shell given the previous one.
fn tail_estimate(last: f64, prev: f64, ratio_floor: f64) -> f64 {
    let mut rho = ratio_floor;
    if prev > 0.0 {
        rho = rho.max(last / prev);
    }
    rho = rho.min(0.95);
    last * rho / (1.0 - rho)
}

// ---------------------------------------------------------------------------
// Direct series
// ---------------------------------------------------------------------------

/// Direct summation of the defining series of `F_A^(n)` by total-degree
/// shells.
///
/// The shell sums are assembled as one polynomial convolution per axis, so
/// the cost is `O(n * max_degree^2)` rather than the count of multi-indices.
/// Requires `sum |x_i| < 1`; `terms_used` reports the number of degree shells
/// consumed.
pub fn fa_direct(p: &LauricellaParams, tol: f64, max_degree: u32) -> Result<EvalResult> {
    p.validate()?;
    validate_tol(tol)?;
    let sum_abs = p.sum_abs_x();
    if !(sum_abs < 1.0) {
        return Err(Error::Domain(format!(
            "direct F_A series requires sum|x_i| < 1, got {sum_abs}"
        )));
    }
    let n = p.n();
    let max_d = max_degree.min(FA_MAX_TOTAL_DEGREE) as usize;

    // Axis polynomials: coef_i[m] = (b_i)_m x_i^m / (m! (c_i)_m).
    // Their product's degree-d coefficient is the shell sum without (a)_d.
    let mut product = vec![0.0f64; max_d + 1];
    product[0] = 1.0;
    let mut axis = vec![0.0f64; max_d + 1];
    for i in 0..n {
        axis[0] = 1.0;
        for m in 1..=max_d {
            let mf = m as f64;
            axis[m] = axis[m - 1] * (p.b[i] + mf - 1.0) * p.x[i] / ((p.c[i] + mf - 1.0) * mf);
        }
        // In-place truncated convolution, highest degree first.
        for d in (0..=max_d).rev() {
            let mut acc = 0.0;
            for k in 0..=d {
                acc += product[d - k] * axis[k];
            }
            product[d] = acc;
        }
    }

    let mut sum = 0.0f64;
    let mut poch_a = 1.0f64; // (a)_d
    let mut small_run = 0usize;
    let mut prev_shell = 0.0f64;
    let mut shell_abs = 0.0f64;
    for (d, &coef) in product.iter().enumerate() {
        if d > 0 {
            poch_a *= p.a + (d - 1) as f64;
        }
        let shell = poch_a * coef;
        sum += shell;
        shell_abs = shell.abs();
        if shell_abs <= tol * sum.abs() {
            small_run += 1;
            if small_run >= STOP_SHELLS {
                return Ok(EvalResult {
                    value: sum,
                    error_estimate: tail_estimate(shell_abs, prev_shell, sum_abs),
                    terms_used: d + 1,
                    converged: true,
                    beyond_direct_domain: false,
                });
            }
        } else {
            small_run = 0;
        }
        prev_shell = shell_abs;
    }
    Ok(EvalResult {
        value: sum,
        error_estimate: tail_estimate(shell_abs, prev_shell, sum_abs),
        terms_used: max_d + 1,
        converged: false,
        beyond_direct_domain: false,
    })
}

// ---------------------------------------------------------------------------
// Closed-form decomposition
// ---------------------------------------------------------------------------

/// Evaluate `F_A^(n)` through its decomposition into products of Gauss
/// functions, summing triangular grids in graded order.
///
/// Each grid `g` contributes
/// `(a)_{N2(n,n)} / prod m_{i,j}! * prod_k [(b_k)_{M2} x_k^{M2} / (c_k)_{M2}]
///  * prod_k 2F1(a + N2(k,n), b_k + M2(k,n); c_k + M2(k,n); x_k)`.
/// Requires each `|x_k| < 1`; when `sum |x_k| >= 1` the result carries the
/// `beyond_direct_domain` flag (the decomposition may still converge there,
/// but no accuracy claim is made). `terms_used` counts grids.
pub fn fa_decomposed(p: &LauricellaParams, tol: f64, max_total_degree: u32) -> Result<EvalResult> {
    p.validate()?;
    validate_tol(tol)?;
    for &xk in &p.x {
        if !(xk.abs() < 1.0) {
            return Err(Error::Domain(format!(
                "decomposition requires every |x_k| < 1, got {xk}"
            )));
        }
    }
    let n = p.n();
    let beyond = p.sum_abs_x() >= 1.0;
    let max_d = max_total_degree.min(FA_MAX_TOTAL_DEGREE);

    if n == 1 {
        // Single empty grid: the sum is exactly one Gauss factor.
        let g = gauss_2f1(GaussParams::new(p.a, p.b[0], p.c[0]), p.x[0], tol)?;
        return Ok(EvalResult {
            beyond_direct_domain: beyond,
            ..g
        });
    }

    // Lookup tables. M2 counts can reach twice the total degree (each cell
    // feeds two axes), so the per-axis tables extend to 2*max_d.
    let max_m = (2 * max_d) as usize;
    let mut ratio = vec![vec![1.0f64; max_m + 1]; n]; // (b_k)_M / (c_k)_M
    let mut xpow = vec![vec![1.0f64; max_m + 1]; n];
    for k in 0..n {
        for m in 1..=max_m {
            let mf = m as f64;
            ratio[k][m] = ratio[k][m - 1] * (p.b[k] + mf - 1.0) / (p.c[k] + mf - 1.0);
            xpow[k][m] = xpow[k][m - 1] * p.x[k];
        }
    }
    let mut poch_a = vec![1.0f64; max_d as usize + 1];
    for d in 1..=max_d as usize {
        poch_a[d] = poch_a[d - 1] * (p.a + d as f64 - 1.0);
    }
    let mut factorial = vec![1.0f64; max_d as usize + 1];
    for d in 1..=max_d as usize {
        factorial[d] = factorial[d - 1] * d as f64;
    }

    let mut gauss_memo: HashMap<(usize, u32, u32), f64> = HashMap::new();
    let mut eval_gauss = |k: usize, m2: u32, n2: u32| -> Result<f64> {
        if let Some(&v) = gauss_memo.get(&(k, m2, n2)) {
            return Ok(v);
        }
        let params = GaussParams::new(p.a + n2 as f64, p.b[k] + m2 as f64, p.c[k] + m2 as f64);
        let v = gauss_2f1(params, p.x[k], INNER_GAUSS_TOL)?.value;
        gauss_memo.insert((k, m2, n2), v);
        Ok(v)
    };

    let mut sum = 0.0f64;
    let mut grids = 0usize;
    let mut current_degree = 0u32;
    let mut shell = 0.0f64;
    let mut prev_shell_abs = 0.0f64;
    let mut last_shell_abs = 0.0f64;
    let mut small_run = 0usize;
    let mut stopped = false;

    for grid in enumerate_grids(n, max_d)? {
        let d = grid.total_degree();
        if d != current_degree {
            // Close the finished shell and apply the stopping rule.
            sum += shell;
            last_shell_abs = shell.abs();
            if last_shell_abs <= tol * sum.abs() {
                small_run += 1;
                if small_run >= STOP_SHELLS {
                    stopped = true;
                    break;
                }
            } else {
                small_run = 0;
            }
            prev_shell_abs = last_shell_abs;
            shell = 0.0;
            current_degree = d;
        }
        let mut inv_fact = 1.0f64;
        for &e in grid.entries() {
            inv_fact /= factorial[e as usize];
        }
        let mut term = poch_a[d as usize] * inv_fact;
        for k in 1..=n {
            let m2 = m_count(&grid, 2, k)?;
            let n2 = n_count(&grid, 2, k)?;
            term *= ratio[k - 1][m2 as usize] * xpow[k - 1][m2 as usize];
            term *= eval_gauss(k - 1, m2, n2)?;
        }
        shell += term;
        grids += 1;
    }
    if !stopped {
        sum += shell;
        last_shell_abs = shell.abs();
        if last_shell_abs <= tol * sum.abs() {
            small_run += 1;
        }
        stopped = small_run >= STOP_SHELLS;
    }

    Ok(EvalResult {
        value: sum,
        error_estimate: tail_estimate(last_shell_abs, prev_shell_abs, p.sum_abs_x().min(0.95)),
        terms_used: grids,
        converged: stopped,
        beyond_direct_domain: beyond,
    })
}

// ---------------------------------------------------------------------------
// Recurrence
// ---------------------------------------------------------------------------

/// Evaluate `F_A^(n)` by the dimension-reducing recurrence: an (n-1)-fold
/// outer sum over `(m_2..m_n)`, each term one Gauss factor in `x_1` times a
/// recursive `F_A^(n-1)` in the remaining arguments.
///
/// This is a verification oracle, not a production path; no memoization is
/// attempted. Preconditions match [`fa_decomposed`]. `terms_used` counts
/// outer-sum terms at the top level.
pub fn fa_recurrence(p: &LauricellaParams, tol: f64, max_total_degree: u32) -> Result<EvalResult> {
    p.validate()?;
    validate_tol(tol)?;
    for &xk in &p.x {
        if !(xk.abs() < 1.0) {
            return Err(Error::Domain(format!(
                "recurrence requires every |x_k| < 1, got {xk}"
            )));
        }
    }
    let beyond = p.sum_abs_x() >= 1.0;
    let max_d = max_total_degree.min(FA_MAX_TOTAL_DEGREE);
    let r = fa_recurrence_inner(p, tol, max_d)?;
    Ok(EvalResult {
        beyond_direct_domain: beyond,
        ..r
    })
}

fn fa_recurrence_inner(p: &LauricellaParams, tol: f64, max_d: u32) -> Result<EvalResult> {
    let n = p.n();
    if n == 1 {
        return gauss_2f1(GaussParams::new(p.a, p.b[0], p.c[0]), p.x[0], tol);
    }

    let mut sum = 0.0f64;
    let mut outer_terms = 0usize;
    let mut prev_shell_abs = 0.0f64;
    let mut last_shell_abs = 0.0f64;
    let mut small_run = 0usize;
    let mut converged = false;

    'shells: for d in 0..=max_d {
        let mut shell = 0.0f64;
        for m in compositions(n - 1, d) {
            // Coefficient (a)_{|m|} (b_1)_{|m|} / (c_1)_{|m|} x_1^{|m|}
            //   * prod_{j>=2} (b_j)_{m_j} x_j^{m_j} / (m_j! (c_j)_{m_j}).
            let df = d as f64;
            let mut coeff = pochhammer(p.a, d) * pochhammer(p.b[0], d) / pochhammer(p.c[0], d)
                * p.x[0].powi(d as i32);
            for (j, &mj) in m.iter().enumerate() {
                let bj = p.b[j + 1];
                let cj = p.c[j + 1];
                coeff *= pochhammer(bj, mj) * p.x[j + 1].powi(mj as i32)
                    / (pochhammer(1.0, mj) * pochhammer(cj, mj));
            }
            let gauss = gauss_2f1(
                GaussParams::new(p.a + df, p.b[0] + df, p.c[0] + df),
                p.x[0],
                INNER_GAUSS_TOL,
            )?
            .value;
            let inner_params = LauricellaParams::new(
                p.a + df,
                (1..n).map(|j| p.b[j] + m[j - 1] as f64).collect(),
                (1..n).map(|j| p.c[j] + m[j - 1] as f64).collect(),
                p.x[1..].to_vec(),
            );
            let inner = fa_recurrence_inner(&inner_params, tol, max_d - d)?.value;
            shell += coeff * gauss * inner;
            outer_terms += 1;
        }
        sum += shell;
        last_shell_abs = shell.abs();
        if last_shell_abs <= tol * sum.abs() {
            small_run += 1;
            if small_run >= STOP_SHELLS {
                converged = true;
                break 'shells;
            }
        } else {
            small_run = 0;
        }
        prev_shell_abs = last_shell_abs;
    }

    Ok(EvalResult {
        value: sum,
        error_estimate: tail_estimate(last_shell_abs, prev_shell_abs, p.sum_abs_x().min(0.95)),
        terms_used: outer_terms,
        converged,
        beyond_direct_domain: false,
    })
}

/// All compositions of `total` into `parts` nonnegative integers.
fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_rel(got: f64, want: f64, rel: f64, what: &str) {
        let err = (got - want).abs() / want.abs().max(1e-300);
        assert!(
            err <= rel,
            "{what}: got {got:.17e}, want {want:.17e}, rel err {err:.3e} > {rel:.1e}"
        );
    }

    // Frozen high-precision reference values.
    const FA_N2_REF: f64 = 1.1253693102820507; // a=.5 b=(.3,.4) c=(.7,.9) x=(.2,.25)
    const FA_N2_NEG: f64 = 0.97880653410809795; // a=.8 b=(.4,.6) c=(.9,1.3) x=(-.3,.2)
    const FA_N3_REF: f64 = 1.0871339236276564; // a=.4 b=(.2,.3,.5) c=(.6,.8,1.1) x=(.1,.15,.2)
    const FA_N4: f64 = 1.1034145651866564;
    // a=.7 b=(.2,.3,.4,.25) c=(.9,1.1,.8,1.2) x=(.1,.12,.08,.15)

    fn p_n2() -> LauricellaParams {
        LauricellaParams::new(0.5, vec![0.3, 0.4], vec![0.7, 0.9], vec![0.2, 0.25])
    }
    fn p_n2_neg() -> LauricellaParams {
        LauricellaParams::new(0.8, vec![0.4, 0.6], vec![0.9, 1.3], vec![-0.3, 0.2])
    }
    fn p_n3() -> LauricellaParams {
        LauricellaParams::new(
            0.4,
            vec![0.2, 0.3, 0.5],
            vec![0.6, 0.8, 1.1],
            vec![0.1, 0.15, 0.2],
        )
    }
    fn p_n4() -> LauricellaParams {
        LauricellaParams::new(
            0.7,
            vec![0.2, 0.3, 0.4, 0.25],
            vec![0.9, 1.1, 0.8, 1.2],
            vec![0.1, 0.12, 0.08, 0.15],
        )
    }

    #[test]
    fn direct_matches_frozen_values() {
        let r = fa_direct(&p_n2(), 1e-14, 60).unwrap();
        assert!(r.converged);
        assert_rel(r.value, FA_N2_REF, 1e-12, "fa_direct n=2");
        let r = fa_direct(&p_n2_neg(), 1e-14, 60).unwrap();
        assert_rel(r.value, FA_N2_NEG, 1e-12, "fa_direct n=2 negative x");
        let r = fa_direct(&p_n3(), 1e-14, 60).unwrap();
        assert_rel(r.value, FA_N3_REF, 1e-12, "fa_direct n=3");
        let r = fa_direct(&p_n4(), 1e-14, 60).unwrap();
        assert_rel(r.value, FA_N4, 1e-12, "fa_direct n=4");
    }

    #[test]
    fn decomposed_matches_frozen_values() {
        let r = fa_decomposed(&p_n2(), 1e-12, 24).unwrap();
        assert!(r.converged);
        assert_rel(r.value, FA_N2_REF, 1e-10, "fa_decomposed n=2");
        let r = fa_decomposed(&p_n2_neg(), 1e-12, 24).unwrap();
        assert_rel(r.value, FA_N2_NEG, 1e-10, "fa_decomposed n=2 negative x");
        let r = fa_decomposed(&p_n3(), 1e-12, 24).unwrap();
        assert_rel(r.value, FA_N3_REF, 1e-10, "fa_decomposed n=3");
        let r = fa_decomposed(&p_n4(), 1e-12, 16).unwrap();
        assert_rel(r.value, FA_N4, 1e-9, "fa_decomposed n=4");
    }

    #[test]
    fn recurrence_matches_frozen_values() {
        let r = fa_recurrence(&p_n2(), 1e-12, 24).unwrap();
        assert_rel(r.value, FA_N2_REF, 1e-10, "fa_recurrence n=2");
        let r = fa_recurrence(&p_n3(), 1e-12, 24).unwrap();
        assert_rel(r.value, FA_N3_REF, 1e-10, "fa_recurrence n=3");
        let r = fa_recurrence(&p_n4(), 1e-12, 16).unwrap();
        assert_rel(r.value, FA_N4, 1e-9, "fa_recurrence n=4");
    }

    #[test]
    fn n1_equals_gauss_for_all_three() {
        let p = LauricellaParams::new(0.5, vec![0.7], vec![1.3], vec![0.45]);
        let gauss = gauss_2f1(GaussParams::new(0.5, 0.7, 1.3), 0.45, 1e-14)
            .unwrap()
            .value;
        for (r, what) in [
            (fa_direct(&p, 1e-14, 80).unwrap(), "direct"),
            (fa_decomposed(&p, 1e-14, 24).unwrap(), "decomposed"),
            (fa_recurrence(&p, 1e-14, 24).unwrap(), "recurrence"),
        ] {
            assert_rel(r.value, gauss, 1e-12, &format!("n=1 {what}"));
        }
    }

    #[test]
    fn zero_argument_gives_one() {
        let p = LauricellaParams::new(0.5, vec![0.3, 0.4], vec![0.7, 0.9], vec![0.0, 0.0]);
        assert_eq!(fa_direct(&p, 1e-12, 24).unwrap().value, 1.0);
        assert_eq!(fa_decomposed(&p, 1e-12, 24).unwrap().value, 1.0);
        assert_eq!(fa_recurrence(&p, 1e-12, 24).unwrap().value, 1.0);
    }

    #[test]
    fn permutation_symmetry_of_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = rng.gen_range(0.1..1.5);
            let b: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..1.5)).collect();
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..2.0)).collect();
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.2..0.2)).collect();
            let p = LauricellaParams::new(a, b.clone(), c.clone(), x.clone());
            let base = fa_direct(&p, 1e-14, 60).unwrap().value;
            for perm in [[1usize, 2, 0], [2, 0, 1], [1, 0, 2]] {
                let q = LauricellaParams::new(
                    a,
                    perm.iter().map(|&i| b[i]).collect(),
                    perm.iter().map(|&i| c[i]).collect(),
                    perm.iter().map(|&i| x[i]).collect(),
                );
                let v = fa_direct(&q, 1e-14, 60).unwrap().value;
                assert_rel(v, base, 1e-12, "permutation symmetry");
            }
        }
    }

    #[test]
    fn trailing_zero_argument_reduces_dimension() {
        let p3 = LauricellaParams::new(
            0.6,
            vec![0.3, 0.7, 1.1],
            vec![0.8, 1.2, 0.9],
            vec![0.25, -0.15, 0.0],
        );
        let p2 = LauricellaParams::new(0.6, vec![0.3, 0.7], vec![0.8, 1.2], vec![0.25, -0.15]);
        let v3 = fa_direct(&p3, 1e-14, 60).unwrap().value;
        let v2 = fa_direct(&p2, 1e-14, 60).unwrap().value;
        assert_rel(v3, v2, 1e-12, "x_n = 0 reduction (direct)");
        let v3 = fa_decomposed(&p3, 1e-13, 24).unwrap().value;
        let v2 = fa_decomposed(&p2, 1e-13, 24).unwrap().value;
        assert_rel(v3, v2, 1e-10, "x_n = 0 reduction (decomposed)");
    }

    #[test]
    fn three_way_agreement_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 1..=4usize {
            for _ in 0..25 {
                let a = rng.gen_range(0.1..1.5);
                let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.5)).collect();
                let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
                // Scale |x| so the total stays <= 0.6.
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let scale = rng.gen_range(0.1..0.6) / raw.iter().map(|v| v.abs()).sum::<f64>();
                let x: Vec<f64> = raw.iter().map(|v| v * scale).collect();
                let p = LauricellaParams::new(a, b, c, x);
                let budget = default_max_total_degree(n);
                let direct = fa_direct(&p, 1e-12, 100).unwrap().value;
                let dec = fa_decomposed(&p, 1e-12, budget).unwrap().value;
                let rec = fa_recurrence(&p, 1e-12, budget).unwrap().value;
                assert_rel(dec, direct, 1e-8, &format!("decomposed vs direct n={n}"));
                assert_rel(rec, direct, 1e-8, &format!("recurrence vs direct n={n}"));
            }
        }
    }

    #[test]
    fn negative_arguments_three_way() {
        let p = LauricellaParams::new(
            0.9,
            vec![0.4, 0.8, 0.6],
            vec![1.1, 0.7, 1.4],
            vec![-0.35, -0.1, -0.25],
        );
        let direct = fa_direct(&p, 1e-12, 100).unwrap().value;
        let dec = fa_decomposed(&p, 1e-12, 24).unwrap().value;
        let rec = fa_recurrence(&p, 1e-12, 24).unwrap().value;
        assert_rel(dec, direct, 1e-8, "negative x decomposed");
        assert_rel(rec, direct, 1e-8, "negative x recurrence");
    }

    #[test]
    fn domain_and_parameter_errors() {
        let p = LauricellaParams::new(0.5, vec![0.3, 0.4], vec![0.7, 0.9], vec![0.6, 0.5]);
        assert!(matches!(fa_direct(&p, 1e-12, 24), Err(Error::Domain(_))));
        // Decomposition still accepts it (each |x_k| < 1) but flags it.
        let r = fa_decomposed(&p, 1e-10, 24).unwrap();
        assert!(r.beyond_direct_domain);

        let p = LauricellaParams::new(0.5, vec![0.3], vec![0.7], vec![1.2]);
        assert!(matches!(
            fa_decomposed(&p, 1e-12, 24),
            Err(Error::Domain(_))
        ));

        let bad_c = LauricellaParams::new(0.5, vec![0.3], vec![-2.0], vec![0.2]);
        assert!(matches!(
            fa_direct(&bad_c, 1e-12, 24),
            Err(Error::Parameter(_))
        ));

        let mismatched = LauricellaParams::new(0.5, vec![0.3, 0.4], vec![0.7], vec![0.2, 0.1]);
        assert!(matches!(
            fa_direct(&mismatched, 1e-12, 24),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn truncation_is_flagged_when_budget_too_small() {
        // Large arguments converge too slowly for a degree-2 budget.
        let p = LauricellaParams::new(0.9, vec![0.8, 0.7], vec![0.9, 1.1], vec![0.45, 0.45]);
        let r = fa_direct(&p, 1e-12, 2).unwrap();
        assert!(!r.converged);
        assert!(r.error_estimate > 0.0);
    }
}
