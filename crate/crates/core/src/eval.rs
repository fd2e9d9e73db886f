//! Series-evaluation result type shared by all summation routines.

/// Outcome of a truncated series evaluation.
///
/// `value` is always the best available partial sum; when `converged` is
/// false the stopping rule did not fire before the term/degree budget ran
/// out and `error_estimate` should be treated as a lower bound on the
/// truncation error rather than a certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// The (possibly truncated) sum.
    pub value: f64,
    /// Estimated absolute truncation error of the returned value.
    pub error_estimate: f64,
    /// Number of series terms (for multi-series: grids/terms) accumulated.
    pub terms_used: usize,
    /// True when the stopping rule fired before any budget cap was hit.
    pub converged: bool,
    /// True when the value was produced outside the region where the direct
    /// series definition converges (e.g. the decomposition evaluated with
    /// `sum |x_i| >= 1`); the value is an analytic-continuation candidate and
    /// carries no accuracy claim.
    pub beyond_direct_domain: bool,
}

impl EvalResult {
    /// A value known in closed form (no truncation involved).
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            error_estimate: 0.0,
            terms_used: 1,
            converged: true,
            beyond_direct_domain: false,
        }
    }

    /// Rescale by a positive prefactor, propagating the error estimate.
    pub(crate) fn scaled(self, factor: f64) -> Self {
        EvalResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}
