//! The Bellman value `B(f, F, k)` and the one-variable reduction behind it.
//!
//! For `k < 1` the value is the maximum of
//! `R_k(B) = (F - (f-B)^p/(1-k)^(p-1)) · ω_p(Z(B))^p` over the interval where
//! `h_k(B) = (f-B)^p/(1-k)^(p-1) + B^p/k^(p-1) ≤ F`. The maximizer `B_0`
//! satisfies `f(1-k)/(f-B_0) = ω_{p,k}(f^p/F)`, which gives the value in
//! closed form:
//!
//! ```text
//! [F ω^p - (1-k) f^p] · [(1 - (1-k)/ω) / k]^p,   ω = ω_{p,k}(f^p/F)
//! ```
//!
//! The argument of `ω_{p,k}` is `f^p/F`. Printing it as `f^p/p` would be
//! inconsistent with the characterization of `B_0`, and only the `f^p/F`
//! reading agrees with `R_k(B_0)`; [`bellman_value`] checks that agreement
//! on every call.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{omega_p, omega_pk, Exponent, RootConfig};
use crate::search::{bisect, golden_max};

/// Relative slack on `f^p ≤ F` and `h_k(B) ≤ F`.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// `f^p/F` this close to 1 is treated as the constant-function case.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Relative agreement demanded between the closed form and `R_k(B_0)`.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Relative agreement expected between the grid maximum and the closed form.
pub const GRID_TOL: f64 = 1e-6;

pub const DEFAULT_GRID: usize = 1000;

/// A problem instance: exponent `p`, `f = ∫φ`, `F = ∫φ^p`, and the measure
/// `k` of the set the maximal function is integrated over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub p: Exponent,
    pub f: f64,
    #[serde(rename = "F")]
    pub big_f: f64,
    pub k: f64,
}

impl Params {
    pub fn new(p: f64, f: f64, big_f: f64, k: f64) -> Result<Self> {
        let p = Exponent::new(p)?;
        Self::with_exponent(p, f, big_f, k)
    }

    pub fn with_exponent(p: Exponent, f: f64, big_f: f64, k: f64) -> Result<Self> {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::InvalidParams(format!("f > 0 violated (f = {f})")));
        }
        if !(big_f.is_finite() && big_f > 0.0) {
            return Err(Error::InvalidParams(format!(
                "F > 0 violated (F = {big_f})"
            )));
        }
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "0 < k <= 1 violated (k = {k})"
            )));
        }
        let fp = f.powf(p.get());
        if !fp.is_finite() || fp > big_f * (1.0 + FEASIBILITY_TOL) {
            return Err(Error::InvalidParams(format!(
                "f^p ≤ F violated (f^p = {fp}, F = {big_f})"
            )));
        }
        Ok(Params { p, f, big_f, k })
    }

    /// `f^p / F`, clamped to at most 1.
    pub fn u(&self) -> f64 {
        (self.f.powf(self.p.get()) / self.big_f).min(1.0)
    }

    /// `f^p = F`: only the constant function is admissible.
    pub fn is_degenerate(&self) -> bool {
        self.u() >= 1.0 - DEGENERATE_TOL
    }

    fn require_partial_k(&self, what: &'static str) -> Result<()> {
        if self.k >= 1.0 {
            Err(Error::Unsupported(what))
        } else {
            Ok(())
        }
    }

    fn check_b(&self, b: f64) -> Result<f64> {
        let slack = 1e-12 * self.f;
        if !(b >= -slack && b <= self.f + slack) {
            return Err(Error::Domain {
                name: "B",
                value: b,
                expected: "[0, f]",
            });
        }
        Ok(b.clamp(0.0, self.f))
    }

    /// `(f-B)^p/(1-k)^(p-1)`: the least `L^p` mass outside `K` given head
    /// mass `B`.
    fn tail_energy(&self, b: f64) -> f64 {
        let p = self.p.get();
        (self.f - b).powf(p) / (1.0 - self.k).powf(p - 1.0)
    }

    fn head_energy(&self, b: f64) -> f64 {
        let p = self.p.get();
        b.powf(p) / self.k.powf(p - 1.0)
    }
}

/// `[p0, p1]`, the set of head masses `B` with `h_k(B) ≤ F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleInterval {
    pub p0: f64,
    pub p1: f64,
}

impl FeasibleInterval {
    pub fn width(&self) -> f64 {
        self.p1 - self.p0
    }

    pub fn contains(&self, b: f64) -> bool {
        b >= self.p0 && b <= self.p1
    }
}

/// The Bellman value with every intermediate quantity and the grid
/// cross-check.
///
/// For `k = 1` there is no reduction over `B`: `b0 = f`, `z0 = f^p/F`, the
/// interval is the single point `f`, and the "grid" entries repeat the value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellmanReport {
    pub params: Params,
    pub value: f64,
    pub b0: f64,
    pub z0: f64,
    pub omega_pk: f64,
    pub a: f64,
    pub interval: FeasibleInterval,
    pub grid_max_value: f64,
    pub grid_max_location: f64,
}

impl BellmanReport {
    pub fn grid_relative_gap(&self) -> f64 {
        (self.grid_max_value - self.value).abs() / self.value.abs().max(f64::MIN_POSITIVE)
    }

    pub fn grid_consistent(&self) -> bool {
        self.grid_relative_gap() <= GRID_TOL
    }
}

/// Solver and grid settings for [`bellman_value_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellmanConfig {
    pub root: RootConfig,
    pub grid: usize,
}

impl Default for BellmanConfig {
    fn default() -> Self {
        BellmanConfig {
            root: RootConfig::default(),
            grid: DEFAULT_GRID,
        }
    }
}

/// `h_k(B) = (f-B)^p/(1-k)^(p-1) + B^p/k^(p-1)` for `0 ≤ B ≤ f`, `k < 1`.
pub fn hk_eval(params: &Params, b: f64) -> Result<f64> {
    params.require_partial_k("h_k at k = 1")?;
    let b = params.check_b(b)?;
    Ok(params.tail_energy(b) + params.head_energy(b))
}

/// Roots of `h_k(B) = F` on either side of the minimizer `B = kf`, clamped
/// to `[0, f]`. `h_k` is strictly convex with `h_k(kf) = f^p ≤ F`.
pub fn feasible_interval(params: &Params) -> Result<FeasibleInterval> {
    feasible_interval_with(params, &RootConfig::default())
}

pub fn feasible_interval_with(params: &Params, cfg: &RootConfig) -> Result<FeasibleInterval> {
    params.require_partial_k("feasible interval at k = 1")?;
    let kf = params.k * params.f;
    if params.is_degenerate() {
        return Ok(FeasibleInterval { p0: kf, p1: kf });
    }
    let excess = |b: f64| params.tail_energy(b) + params.head_energy(b) - params.big_f;
    // bisect keeps the sign of each endpoint, so the feasible side is
    // `hi` on the left branch and `lo` on the right one
    let p0 = if excess(0.0) <= 0.0 {
        0.0
    } else {
        bisect(excess, 0.0, kf, cfg)?.hi
    };
    let p1 = if excess(params.f) <= 0.0 {
        params.f
    } else {
        bisect(excess, kf, params.f, cfg)?.lo
    };
    Ok(FeasibleInterval { p0, p1 })
}

/// `Z(B) = B^p / (k^(p-1) (F - (f-B)^p/(1-k)^(p-1)))`, which lies in `[0, 1]`
/// exactly on the feasible interval.
fn z_of(params: &Params, b: f64) -> Result<(f64, f64)> {
    let room = params.big_f - params.tail_energy(b);
    let head = params.head_energy(b);
    if head > room + FEASIBILITY_TOL * params.big_f {
        return Err(Error::Domain {
            name: "B",
            value: b,
            expected: "h_k(B) ≤ F",
        });
    }
    if room <= 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((room, (head / room).clamp(0.0, 1.0)))
}

/// `R_k(B) = (F - (f-B)^p/(1-k)^(p-1)) · ω_p(Z(B))^p`.
pub fn rk_eval(params: &Params, b: f64) -> Result<f64> {
    rk_eval_with(params, b, &RootConfig::default())
}

pub fn rk_eval_with(params: &Params, b: f64, cfg: &RootConfig) -> Result<f64> {
    params.require_partial_k("R_k at k = 1")?;
    let b = params.check_b(b)?;
    let (room, z) = z_of(params, b)?;
    if room == 0.0 {
        return Ok(0.0);
    }
    Ok(room * omega_p(params.p, z, cfg)?.powf(params.p.get()))
}

/// The maximizer `B_0 = f - f(1-k)/ω_{p,k}(f^p/F)` of `R_k`.
pub fn solve_b0(params: &Params) -> Result<f64> {
    solve_b0_with(params, &RootConfig::default())
}

pub fn solve_b0_with(params: &Params, cfg: &RootConfig) -> Result<f64> {
    params.require_partial_k("B_0 at k = 1")?;
    let kf = params.k * params.f;
    if params.is_degenerate() {
        return Ok(kf);
    }
    let w = omega_pk(params.p, params.k, params.u(), cfg)?;
    b0_from_omega(params, w, cfg)
}

fn b0_from_omega(params: &Params, w: f64, cfg: &RootConfig) -> Result<f64> {
    let (p, f, k) = (params.p.get(), params.f, params.k);
    let b0 = f - f * (1.0 - k) / w;
    let interval = feasible_interval_with(params, cfg)?;
    let upper = (p * k * f / (p - 1.0 + k)).min(interval.p1);
    let slack = 1e-12 * f;
    if b0 < k * f - slack {
        return Err(Error::Consistency {
            what: "B_0 > kf",
            lhs: b0,
            rhs: k * f,
        });
    }
    if b0 > upper + slack {
        return Err(Error::Consistency {
            what: "B_0 < min(pkf/(p-1+k), p1)",
            lhs: b0,
            rhs: upper,
        });
    }
    Ok(b0)
}

/// The closed-form value alone, without intermediate quantities or the grid
/// cross-check.
pub fn bellman_closed(params: &Params) -> Result<f64> {
    Ok(closed_parts(params, &RootConfig::default())?.value)
}

struct ClosedParts {
    value: f64,
    b0: f64,
    omega_pk: f64,
}

fn closed_parts(params: &Params, cfg: &RootConfig) -> Result<ClosedParts> {
    let (p, f, big_f, k) = (params.p.get(), params.f, params.big_f, params.k);
    if params.is_degenerate() {
        return Ok(ClosedParts {
            value: k * f.powf(p),
            b0: k * f,
            omega_pk: 1.0,
        });
    }
    let u = params.u();
    if k >= 1.0 {
        let w = omega_p(params.p, u, cfg)?;
        return Ok(ClosedParts {
            value: big_f * w.powf(p),
            b0: f,
            omega_pk: w,
        });
    }
    let w = omega_pk(params.p, k, u, cfg)?;
    let value = (big_f * w.powf(p) - (1.0 - k) * f.powf(p)) * ((1.0 - (1.0 - k) / w) / k).powf(p);
    let b0 = b0_from_omega(params, w, cfg)?;
    let via_rk = rk_eval_with(params, b0, cfg)?;
    if (value - via_rk).abs() > CLOSED_FORM_TOL * value.abs() {
        return Err(Error::Consistency {
            what: "closed form vs R_k(B_0)",
            lhs: value,
            rhs: via_rk,
        });
    }
    Ok(ClosedParts {
        value,
        b0,
        omega_pk: w,
    })
}

/// Full report with the default grid size.
pub fn bellman_value(params: &Params) -> Result<BellmanReport> {
    bellman_value_with(params, &BellmanConfig::default())
}

pub fn bellman_value_with(params: &Params, cfg: &BellmanConfig) -> Result<BellmanReport> {
    let parts = closed_parts(params, &cfg.root)?;
    let (f, k) = (params.f, params.k);
    if params.is_degenerate() {
        let kf = k * f;
        return Ok(BellmanReport {
            params: *params,
            value: parts.value,
            b0: kf,
            z0: 1.0,
            omega_pk: 1.0,
            a: 1.0,
            interval: FeasibleInterval { p0: kf, p1: kf },
            grid_max_value: parts.value,
            grid_max_location: kf,
        });
    }
    if k >= 1.0 {
        return Ok(BellmanReport {
            params: *params,
            value: parts.value,
            b0: f,
            z0: params.u(),
            omega_pk: parts.omega_pk,
            a: parts.omega_pk,
            interval: FeasibleInterval { p0: f, p1: f },
            grid_max_value: parts.value,
            grid_max_location: f,
        });
    }
    let interval = feasible_interval_with(params, &cfg.root)?;
    let (_, z0) = z_of(params, parts.b0)?;
    let a = omega_p(params.p, z0, &cfg.root)?;
    let (grid_max_location, grid_max_value) = rk_grid_max_with(params, cfg.grid, &cfg.root)?;
    Ok(BellmanReport {
        params: *params,
        value: parts.value,
        b0: parts.b0,
        z0,
        omega_pk: parts.omega_pk,
        a,
        interval,
        grid_max_value,
        grid_max_location,
    })
}

/// Maximum of `R_k` over `n` uniform points of the feasible interval,
/// refined by golden-section search between the neighbours of the best
/// point. Returns `(location, value)`.
pub fn rk_grid_max(params: &Params, n: usize) -> Result<(f64, f64)> {
    rk_grid_max_with(params, n, &RootConfig::default())
}

pub fn rk_grid_max_with(params: &Params, n: usize, cfg: &RootConfig) -> Result<(f64, f64)> {
    params.require_partial_k("R_k grid at k = 1")?;
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "grid size must be >= 3, got {n}"
        )));
    }
    let iv = feasible_interval_with(params, cfg)?;
    if iv.width() <= 0.0 {
        return Ok((iv.p0, rk_eval_with(params, iv.p0, cfg)?));
    }
    let step = iv.width() / (n - 1) as f64;
    let at = |i: usize| {
        if i + 1 == n {
            iv.p1
        } else {
            iv.p0 + step * i as f64
        }
    };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let v = rk_eval_with(params, at(i), cfg)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = at(best.0.saturating_sub(1));
    let hi = at((best.0 + 1).min(n - 1));
    let refined = golden_max(
        |b| rk_eval_with(params, b, cfg).unwrap_or(f64::NEG_INFINITY),
        lo,
        hi,
        1e-14 * params.f,
        200,
    );
    if refined.1 >= best.1 {
        Ok(refined)
    } else {
        Ok((at(best.0), best.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    fn par(p: f64, f: f64, big_f: f64, k: f64) -> Params {
        Params::new(p, f, big_f, k).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(2.0, 2.0, 1.0, 0.5)
            .unwrap_err()
            .to_string()
            .contains("f^p ≤ F violated"));
        assert!(Params::new(2.0, 1.0, 1.0, 0.0).is_err());
        assert!(Params::new(2.0, 1.0, 1.0, 1.1).is_err());
        assert!(Params::new(2.0, -1.0, 1.0, 0.5).is_err());
        assert!(Params::new(2.0, 1.0, 0.0, 0.5).is_err());
        assert!(Params::new(0.5, 1.0, 1.0, 0.5).is_err());
        assert!(par(2.0, 1.0, 1.0, 0.5).is_degenerate());
    }

    #[test]
    fn hk_examples() {
        assert!(close(
            hk_eval(&par(2.0, 1.0, 2.0, 0.5), 0.5).unwrap(),
            1.0,
            1e-15
        ));
        assert!(close(
            hk_eval(&par(2.0, 1.0, 2.0, 0.5), 0.0).unwrap(),
            2.0,
            1e-15
        ));
        assert!(close(
            hk_eval(&par(3.0, 1.0, 2.0, 0.5), 0.5).unwrap(),
            1.0,
            1e-15
        ));
        assert!(hk_eval(&par(2.0, 1.0, 2.0, 0.5), 1.5).is_err());
        assert!(matches!(
            hk_eval(&par(2.0, 1.0, 2.0, 1.0), 0.5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn hk_minimum_is_f_pow_p() {
        for &(p, f, k) in &[(1.5, 2.0, 0.3), (3.0, 0.7, 0.9), (7.0, 1.2, 0.05)] {
            let pr = par(p, f, 10.0 * f.powf(p), k);
            let h = hk_eval(&pr, k * f).unwrap();
            assert!(close(h, f.powf(p), 1e-13));
            assert!(hk_eval(&pr, k * f * 0.99).unwrap() > h);
            assert!(hk_eval(&pr, (k * f * 1.01).min(f)).unwrap() > h);
        }
    }

    #[test]
    fn feasible_interval_examples() {
        let iv = feasible_interval(&par(2.0, 1.0, 2.0, 0.5)).unwrap();
        assert_eq!((iv.p0, iv.p1), (0.0, 1.0));
        let iv = feasible_interval(&par(2.0, 1.0, 1.0, 0.5)).unwrap();
        assert_eq!((iv.p0, iv.p1), (0.5, 0.5));
        // 2((1-B)^2 + B^2) = 1.5, i.e. 4B^2 - 4B + 0.5 = 0
        let iv = feasible_interval(&par(2.0, 1.0, 1.5, 0.5)).unwrap();
        let r2 = 2f64.sqrt();
        assert!(close(iv.p0, (2.0 - r2) / 4.0, 1e-14), "{iv:?}");
        assert!(close(iv.p1, (2.0 + r2) / 4.0, 1e-14), "{iv:?}");
    }

    #[test]
    fn feasible_interval_endpoints_hit_f() {
        let pr = par(3.0, 1.0, 4.0, 0.25);
        let iv = feasible_interval(&pr).unwrap();
        assert_eq!(iv.p0, 0.0);
        assert!(iv.p1 < 1.0);
        let h = hk_eval(&pr, iv.p1).unwrap();
        assert!(h <= pr.big_f && close(h, pr.big_f, 1e-12));
    }

    #[test]
    fn rk_examples() {
        let pr = par(2.0, 1.0, 2.0, 0.5);
        let b0 = (3.0 - SQRT3) / 2.0;
        assert!(close(rk_eval(&pr, b0).unwrap(), 3.0 * SQRT3, 1e-12));
        let expected = 1.5 * (1.0 + (2.0f64 / 3.0).sqrt()).powi(2);
        assert!(close(rk_eval(&pr, 0.5).unwrap(), expected, 1e-12));
        assert!(close(
            rk_eval(&par(2.0, 1.0, 1.0, 0.5), 0.5).unwrap(),
            0.5,
            1e-15
        ));
        // outside the feasible interval [0.25, 0.75]
        assert!(rk_eval(&par(2.0, 1.0, 1.5, 0.5), 0.1).is_err());
    }

    #[test]
    fn b0_examples() {
        let b0 = solve_b0(&par(2.0, 1.0, 2.0, 0.5)).unwrap();
        assert!(close(b0, (3.0 - SQRT3) / 2.0, 1e-13));
        assert_eq!(solve_b0(&par(2.0, 1.0, 1.0, 0.5)).unwrap(), 0.5);
        let pr = par(3.0, 1.0, 4.0, 0.25);
        let b0 = solve_b0(&pr).unwrap();
        assert!(b0 > 0.25 && b0 < 1.0 / 3.0, "{b0}");
        let (loc, _) = rk_grid_max(&pr, 1000).unwrap();
        assert!((loc - b0).abs() < 1e-6, "{loc} vs {b0}");
    }

    #[test]
    fn value_examples() {
        let r = bellman_value(&par(2.0, 1.0, 2.0, 0.5)).unwrap();
        assert!(close(r.value, 3.0 * SQRT3, 1e-12));
        assert!(close(r.a, SQRT3, 1e-10));
        assert!(r.grid_consistent());
        let r = bellman_value(&par(2.0, 1.0, 2.0, 1.0)).unwrap();
        assert!(close(r.value, 2.0 * (1.0 + 0.5f64.sqrt()).powi(2), 1e-12));
        let r = bellman_value(&par(2.0, 1.0, 1.0, 0.3)).unwrap();
        assert_eq!(r.value, 0.3);
    }

    #[test]
    fn grid_max_examples() {
        let (loc, v) = rk_grid_max(&par(2.0, 1.0, 2.0, 0.5), 1000).unwrap();
        assert!((loc - 0.633_974_596_215_561_4).abs() < 1e-6);
        assert!(close(v, 3.0 * SQRT3, 1e-9));
        let (loc, v) = rk_grid_max(&par(2.0, 1.0, 1.0, 0.5), 10).unwrap();
        assert_eq!(loc, 0.5);
        assert!(close(v, 0.5, 1e-15));
        let pr = par(1.5, 1.0, 3.0, 0.9);
        let (_, v) = rk_grid_max(&pr, 1000).unwrap();
        assert!(close(v, bellman_closed(&pr).unwrap(), 1e-6));
        assert!(rk_grid_max(&pr, 2).is_err());
    }

    #[test]
    fn values_against_high_precision_oracle() {
        // computed independently with 40-digit bisection and a fine grid of R_k
        let cases = [
            (
                (3.0, 1.0, 4.0, 0.25),
                10.810_007_772_951_068,
                0.327_647_426_169,
            ),
            (
                (1.5, 1.0, 3.0, 0.9),
                12.366_368_065_050_727,
                0.958_805_036_032,
            ),
            (
                (1.1, 1.0, 5.0, 0.3),
                57.659_144_415_438_24,
                0.803_383_007_262,
            ),
            (
                (10.0, 1.0, 3.0, 0.7),
                7.071_700_471_182_014,
                0.718_781_928_277,
            ),
        ];
        for ((p, f, big_f, k), value, b0) in cases {
            let r = bellman_value(&par(p, f, big_f, k)).unwrap();
            assert!(close(r.value, value, 1e-10), "{p}: {} vs {value}", r.value);
            assert!((r.b0 - b0).abs() < 1e-11, "{p}: {} vs {b0}", r.b0);
        }
    }
}
