//! Error taxonomy shared by every module in the crate.

use std::fmt;

/// Library-level error type.
///
/// Convergence shortfalls are *not* errors: evaluators report them through
/// [`crate::EvalResult::converged`] so a caller still receives the best
/// available value together with an error estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (e.g. `|x| >= 1` for the Gauss series, a non-positive coordinate on a
    /// singular axis, a Gamma-quotient precondition violated).
    Domain(String),
    /// A parameter set is structurally invalid (e.g. `c` a non-positive
    /// integer in `2F1`, mismatched lengths, `alpha` outside `(0, 1/2)`).
    Parameter(String),
    /// The evaluation point coincides with the singular point `x = x0`.
    SingularPoint,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::SingularPoint => write!(f, "evaluation point coincides with the singular point"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_messages_are_informative() {
        let d = Error::Domain("|x| >= 1".into());
        assert_eq!(d.to_string(), "domain error: |x| >= 1");
        let p = Error::Parameter("c must not be a non-positive integer".into());
        assert!(p.to_string().starts_with("parameter error:"));
        assert_eq!(
            Error::SingularPoint.to_string(),
            "evaluation point coincides with the singular point"
        );
    }

    #[test]
    fn errors_are_comparable() {
        assert_eq!(Error::SingularPoint, Error::SingularPoint);
        assert_ne!(Error::Domain("a".into()), Error::Parameter("a".into()));
    }
}
