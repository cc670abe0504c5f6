//! Scalar kernels: the polynomial-like map `H_p`, its inverse `ω_p`, the
//! deformed equation `σ` and its root `ω_{p,k}`.
//!
//! `H_p(z) = -(p-1) z^p + p z^(p-1)` is strictly decreasing from 1 to 0 on
//! `[1, p/(p-1)]`, so `ω_p` is well defined on `[0, 1]`. For `k ∈ (0, 1]`,
//! `σ(1) = k (1 - U) ≥ 0` and `σ(1 + k/(p-1)) = -U p k² / (p - 1 + k) ≤ 0`,
//! which is the sign change bisection relies on. No monotonicity of `σ` is
//! assumed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::find_root;

/// Smallest admissible exponent by default. Below this `p/(p-1)` is too
/// badly conditioned for double precision.
pub const MIN_EXPONENT: f64 = 1.0 + 1e-6;

/// Inputs that miss the unit interval (or a bracket) by at most this much are
/// treated as rounding noise and clamped.
pub const DUST: f64 = 1e-12;

/// An exponent `p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        Self::with_floor(p, MIN_EXPONENT)
    }

    /// Like [`Exponent::new`] with a caller-chosen lower bound (still `> 1`).
    pub fn with_floor(p: f64, floor: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0 && p >= floor) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                expected: "finite, > 1 and above the configured floor",
            });
        }
        Ok(Exponent(p))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// The conjugate exponent `p/(p-1)`, which is also the right end of the
    /// domain of `H_p`.
    #[inline]
    pub fn conjugate(self) -> f64 {
        self.0 / (self.0 - 1.0)
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Exponent::new(p)
    }
}

impl From<Exponent> for f64 {
    fn from(p: Exponent) -> f64 {
        p.0
    }
}

/// Termination settings for the bracketed solvers.
///
/// `abs_tol` bounds the residual accepted at the returned root; `rel_tol`
/// bounds the final bracket width relative to the root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            abs_tol: 1e-12,
            rel_tol: 4.0 * f64::EPSILON,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_iter >= 1) {
            return Err(Error::InvalidParams(format!(
                "root config needs abs_tol > 0, rel_tol > 0, max_iter >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Clamps `u` into `[0, 1]` if it misses by at most [`DUST`].
pub(crate) fn clamp_unit(name: &'static str, u: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&u) {
        Ok(u)
    } else if (-DUST..0.0).contains(&u) {
        Ok(0.0)
    } else if u > 1.0 && u <= 1.0 + DUST {
        Ok(1.0)
    } else {
        Err(Error::Domain {
            name,
            value: u,
            expected: "[0, 1]",
        })
    }
}

/// `H_p(z) = -(p-1) z^p + p z^(p-1)` on `[1, p/(p-1)]`.
pub fn hp_eval(p: Exponent, z: f64) -> Result<f64> {
    let q = p.conjugate();
    if !(z >= 1.0 - DUST && z <= q + DUST) {
        return Err(Error::Domain {
            name: "z",
            value: z,
            expected: "[1, p/(p-1)]",
        });
    }
    Ok(hp_raw(p.get(), z.clamp(1.0, q)))
}

#[inline]
fn hp_raw(p: f64, z: f64) -> f64 {
    z.powf(p - 1.0) * (p - (p - 1.0) * z)
}

/// `ω_p(U)`: the unique `z ∈ [1, p/(p-1)]` with `H_p(z) = U`.
pub fn omega_p(p: Exponent, u: f64, cfg: &RootConfig) -> Result<f64> {
    let u = clamp_unit("U", u)?;
    if u == 1.0 {
        return Ok(1.0);
    }
    if u == 0.0 {
        return Ok(p.conjugate());
    }
    let pv = p.get();
    bracketed_root(|z| hp_raw(pv, z) - u, 1.0, p.conjugate(), cfg)
}

/// Like `find_root`, except that an endpoint whose residual has the wrong
/// sign by at most `abs_tol` is rounding noise at a root on the boundary.
fn bracketed_root<F: FnMut(f64) -> f64>(
    mut func: F,
    lo: f64,
    hi: f64,
    cfg: &RootConfig,
) -> Result<f64> {
    let (f_lo, f_hi) = (func(lo), func(hi));
    if f_lo <= 0.0 && f_lo >= -cfg.abs_tol {
        return Ok(lo);
    }
    if f_hi >= 0.0 && f_hi <= cfg.abs_tol {
        return Ok(hi);
    }
    find_root(func, lo, hi, cfg)
}

/// `σ(z) = -(p-1) z^p + (p-1+k) z^(p-1) - U [1 + (1-k) ((p-1)/z - p)]`.
pub fn sigma_eval(p: Exponent, k: f64, u: f64, z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain {
            name: "z",
            value: z,
            expected: "z > 0",
        });
    }
    Ok(sigma_raw(p.get(), k, u, z))
}

#[inline]
fn sigma_raw(p: f64, k: f64, u: f64, z: f64) -> f64 {
    z.powf(p - 1.0) * ((p - 1.0 + k) - (p - 1.0) * z) - u * (1.0 + (1.0 - k) * ((p - 1.0) / z - p))
}

/// `ω_{p,k}(U)`: the root of `σ` in `[1, 1 + k/(p-1)]`. For `k = 1` this is
/// `ω_p(U)`.
pub fn omega_pk(p: Exponent, k: f64, u: f64, cfg: &RootConfig) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "(0, 1]",
        });
    }
    let u = clamp_unit("U", u)?;
    let pv = p.get();
    let hi = 1.0 + k / (pv - 1.0);
    bracketed_root(|z| sigma_raw(pv, k, u, z), 1.0, hi, cfg)
}
