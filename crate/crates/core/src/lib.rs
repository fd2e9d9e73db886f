//! Numerical library for the Lauricella hypergeometric function `F_A^(n)`
//! and for the `2^n` fundamental solutions of the singular elliptic operator
//!
//! ```text
//! L u = sum_{i=1}^{m} d2u/dx_i^2 + sum_{j=1}^{n} (2 alpha_j / x_j) du/dx_j
//! ```
//!
//! on the half-space `x_1 > 0, ..., x_n > 0` with `0 < 2 alpha_j < 1`.
//!
//! The crate is organized bottom-up:
//!
//! * [`special`] — log-gamma, digamma, Pochhammer symbols, and the Gauss
//!   hypergeometric function `2F1` (series, Pfaff transformation, summation
//!   at `x = 1`, and internal near-unit-argument machinery);
//! * [`multiindex`] — the triangular summation grids `{m_{i,j}}` of the
//!   decomposition formula together with the index-counting functions
//!   `M_l(k,n)` and `N_l(k,n)`;
//! * [`lauricella`] — three independent evaluators for `F_A^(n)`: the direct
//!   multi-series, the closed-form decomposition into products of Gauss
//!   functions, and the recurrence decomposition used as a cross-check;
//! * [`fundsol`] — geometry of the singular coordinates, the `delta -> k`
//!   indexing, evaluation of the fundamental solutions `q_k(x, x0)` on both
//!   the direct and the transformed (near-singularity) path, and the
//!   closed-form singular limit constant;
//! * [`verify`] — finite-difference application of `L`, PDE residual suites,
//!   singularity-order regression, boundary-property extrapolation, and the
//!   constructive operator identities.
//!
//! All functions are pure and deterministic; no global state, no threads.

// Float literals keep the full precision of their published or frozen
// sources, and validation guards are written `!(x > 0.0)` rather than
// `x <= 0.0` so that NaN inputs are rejected instead of slipping through.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eval;
pub mod fundsol;
pub mod lauricella;
pub mod multiindex;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use eval::EvalResult;
