//! The extremal function
//!
//! ```text
//! g(t) = A1 · t^(-1 + 1/a)   for 0 < t ≤ k
//! g(t) = c                   for k ≤ t ≤ 1
//! ```
//!
//! with `c = (f - B_0)/(1 - k)`, `a = ω_p(Z_0)` and `A1 = B_0 k^(-1/a) / a`.
//! On the head the Hardy average is `a · g(t)`, so the Hardy functional over
//! `(0, k]` is `a^p ∫_0^k g^p`.

use serde::{Deserialize, Serialize};

use crate::bellman::{solve_b0_with, Params};
use crate::error::{Error, Result};
use crate::kernels::{omega_p, RootConfig};

/// Relative tolerance on the continuity of `g` at `t = k`.
pub const CONTINUITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFunction {
    #[serde(flatten)]
    pub params: Params,
    /// Power-law index; the head decays like `t^(-1 + 1/a)`.
    pub a: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    /// Tail constant on `[k, 1]`.
    pub c: f64,
    /// Mass of the head, `∫_0^k g`.
    #[serde(rename = "B0")]
    pub b0: f64,
}

/// Builds `g_k` for `params`.
///
/// For `f^p = F` this is the constant `f`. For `k = 1` the tail is empty and
/// `g(t) = (f/a) t^(-1+1/a)` with `a = ω_p(f^p/F)`; `c` then stores `g(1)`.
pub fn build_extremizer(params: &Params) -> Result<ExtremalFunction> {
    build_extremizer_with(params, &RootConfig::default())
}

pub fn build_extremizer_with(params: &Params, cfg: &RootConfig) -> Result<ExtremalFunction> {
    let (p, f, big_f, k) = (params.p.get(), params.f, params.big_f, params.k);
    if params.is_degenerate() {
        return Ok(ExtremalFunction {
            params: *params,
            a: 1.0,
            a1: f,
            c: f,
            b0: k * f,
        });
    }
    let g = if k >= 1.0 {
        let a = omega_p(params.p, params.u(), cfg)?;
        ExtremalFunction {
            params: *params,
            a,
            a1: f / a,
            c: f / a,
            b0: f,
        }
    } else {
        let b0 = solve_b0_with(params, cfg)?;
        let room = big_f - (f - b0).powf(p) / (1.0 - k).powf(p - 1.0);
        let z0 = b0.powf(p) / (k.powf(p - 1.0) * room);
        if !(z0 > 0.0) {
            return Err(Error::Consistency {
                what: "Z_0 > 0",
                lhs: z0,
                rhs: 0.0,
            });
        }
        let a = omega_p(params.p, z0.min(1.0), cfg)?;
        ExtremalFunction {
            params: *params,
            a,
            a1: b0 * k.powf(-1.0 / a) / a,
            c: (f - b0) / (1.0 - k),
            b0,
        }
    };
    g.check()?;
    Ok(g)
}

impl ExtremalFunction {
    pub fn k(&self) -> f64 {
        self.params.k
    }

    pub fn p(&self) -> f64 {
        self.params.p.get()
    }

    /// `1 - p + p/a`, the exponent of `∫_0^t s^(-p+p/a) ds`; positive iff
    /// `g ∈ L^p`.
    pub fn integrability_margin(&self) -> f64 {
        1.0 - self.p() + self.p() / self.a
    }

    fn check(&self) -> Result<()> {
        if !(self.a1 > 0.0 && self.c > 0.0 && self.b0 > 0.0) {
            return Err(Error::Consistency {
                what: "positive coefficients",
                lhs: self.a1.min(self.c).min(self.b0),
                rhs: 0.0,
            });
        }
        if !(self.a >= 1.0 && self.integrability_margin() > 0.0) {
            return Err(Error::Consistency {
                what: "1 - p + p/a > 0",
                lhs: self.integrability_margin(),
                rhs: 0.0,
            });
        }
        if self.k() < 1.0 && self.continuity_gap() > CONTINUITY_TOL * self.c {
            return Err(Error::Consistency {
                what: "continuity at t = k",
                lhs: self.head_at(self.k()),
                rhs: self.c,
            });
        }
        Ok(())
    }

    fn head_at(&self, t: f64) -> f64 {
        self.a1 * t.powf(-1.0 + 1.0 / self.a)
    }

    fn check_t(t: f64) -> Result<()> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain {
                name: "t",
                value: t,
                expected: "(0, 1]",
            });
        }
        Ok(())
    }

    /// `g(t)`; at `t = k` the tail constant is returned.
    pub fn g_eval(&self, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        Ok(self.value_at(t))
    }

    #[inline]
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        if t < self.k() {
            self.head_at(t)
        } else {
            self.c
        }
    }

    /// `∫_0^t g` in closed form, for `t ∈ [0, 1]`.
    pub fn cumulative(&self, t: f64) -> f64 {
        let k = self.k();
        if t <= 0.0 {
            0.0
        } else if t <= k {
            self.a1 * self.a * t.powf(1.0 / self.a)
        } else {
            self.b0 + self.c * (t - k)
        }
    }

    /// `(∫_0^1 g, ∫_0^1 g^p)`.
    pub fn moments(&self) -> (f64, f64) {
        let (p, k) = (self.p(), self.k());
        let m = self.integrability_margin();
        let l1 = self.a1 * self.a * k.powf(1.0 / self.a) + self.c * (1.0 - k);
        let lp = self.a1.powf(p) * k.powf(m) / m + self.c.powf(p) * (1.0 - k);
        (l1, lp)
    }

    /// `(1/t) ∫_0^t g`.
    pub fn hardy_average(&self, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        let k = self.k();
        if t <= k {
            Ok(self.a * self.value_at(t))
        } else {
            Ok((self.b0 + self.c * (t - k)) / t)
        }
    }

    /// `∫_0^k ((1/t) ∫_0^t g)^p dt = a^p ∫_0^k g^p`.
    pub fn hardy_functional_closed(&self) -> f64 {
        let p = self.p();
        let m = self.integrability_margin();
        (self.a * self.a1).powf(p) * self.k().powf(m) / m
    }

    /// `|A1 k^(-1+1/a) - c|`; zero for `k = 1` where there is no tail.
    pub fn continuity_gap(&self) -> f64 {
        if self.k() >= 1.0 {
            return 0.0;
        }
        (self.head_at(self.k()) - self.c).abs()
    }
}
