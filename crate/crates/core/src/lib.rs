//! Bellman function of the dyadic (tree) maximal operator restricted to a set
//! of prescribed measure.
//!
//! For `p > 1`, `0 < f^p ≤ F` and `k ∈ (0, 1]`, [`bellman_value`] computes
//!
//! ```text
//! B(f, F, k) = sup { ∫_K (Mφ)^p : φ ≥ 0, ∫φ = f, ∫φ^p = F, |K| = k }
//! ```
//!
//! in closed form, and [`build_extremizer`] returns the nonincreasing
//! function on `(0, 1]` whose Hardy functional attains it. The
//! [`verification`] module holds numerical checks that do not go through
//! the closed forms.
//!
//! ```
//! use dyadic_bellman::{bellman_value, build_extremizer, Params};
//!
//! let params = Params::new(2.0, 1.0, 2.0, 0.5)?;
//! let report = bellman_value(&params)?;
//! assert!((report.value - 27f64.sqrt()).abs() < 1e-12);
//!
//! let g = build_extremizer(&params)?;
//! assert!((g.hardy_functional_closed() - report.value).abs() < 1e-9);
//! # Ok::<(), dyadic_bellman::Error>(())
//! ```

// `!(x > 0.0)` is used throughout so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bellman;
mod error;
pub mod extremizer;
pub mod kernels;
pub mod par;
mod search;
pub mod sweep;
pub mod verification;

pub use bellman::{
    bellman_closed, bellman_value, bellman_value_with, feasible_interval, hk_eval, rk_eval,
    rk_grid_max, solve_b0, BellmanConfig, BellmanReport, FeasibleInterval, Params,
};
pub use error::{Error, Result};
pub use extremizer::{build_extremizer, ExtremalFunction};
pub use kernels::{hp_eval, omega_p, omega_pk, sigma_eval, Exponent, RootConfig};
pub use par::Execution;
pub use search::golden_max;
pub use sweep::{run_sweep, SweepParam, SweepRow, SweepSpec, SweepValues};
