//! Independent numerical checks of the closed forms.
//!
//! - [`quadrature`]: the Hardy functional of an extremal function integrated
//!   numerically from point values of `g` alone.
//! - [`step`], [`sampler`], [`probe`]: nonincreasing step functions with
//!   prescribed moments, their exact Hardy functional, and randomized probing
//!   of the supremum.
//! - [`dyadic`]: the dyadic maximal operator on `[0, 1]` and the classical
//!   inequalities it satisfies.

pub mod dyadic;
pub mod probe;
pub mod quadrature;
pub mod sampler;
pub mod step;

pub use dyadic::{
    best_k_set_integral, check_strong_type, check_weak_type, dyadic_bellman_bound, dyadic_maximal,
};
pub use probe::{discretized_extremizer_value, probe_supremum, probe_supremum_with, ProbeReport};
pub use quadrature::{quadrature_hardy, quadrature_hardy_estimate, HardyQuadrature};
pub use sampler::{sample_admissible, sample_admissible_rng, trial_rng};
pub use step::{discrete_hardy, discretize, StepFunction};
