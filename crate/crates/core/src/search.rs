//! One-dimensional bracketing routines: bisection for roots, golden-section
//! search for maxima.

use crate::error::{Error, Result};
use crate::kernels::RootConfig;

/// Final state of a bisection: `lo`/`hi` keep the signs of the initial
/// endpoints.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Endpoint with the smaller residual.
    pub fn best(&self) -> (f64, f64) {
        if self.f_lo.abs() <= self.f_hi.abs() {
            (self.lo, self.f_lo)
        } else {
            (self.hi, self.f_hi)
        }
    }
}

/// Bisects `func` on `[lo, hi]`, which must carry a sign change (a zero at an
/// endpoint counts). Stops once the bracket is `rel_tol`-narrow or a
/// zero is hit exactly.
pub(crate) fn bisect<F>(mut func: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<Bracket>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = func(lo);
    let f_hi = func(hi);
    let mut br = Bracket { lo, hi, f_lo, f_hi };
    if f_lo == 0.0 {
        br.hi = lo;
        br.f_hi = 0.0;
        return Ok(br);
    }
    if f_hi == 0.0 {
        br.lo = hi;
        br.f_lo = 0.0;
        return Ok(br);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    for _ in 0..cfg.max_iter {
        let width = (br.hi - br.lo).abs();
        let mid = br.lo + 0.5 * (br.hi - br.lo);
        if width <= cfg.rel_tol * mid.abs().max(f64::MIN_POSITIVE) || mid == br.lo || mid == br.hi {
            return Ok(br);
        }
        let f_mid = func(mid);
        if f_mid == 0.0 {
            return Ok(Bracket {
                lo: mid,
                hi: mid,
                f_lo: 0.0,
                f_hi: 0.0,
            });
        }
        if f_mid.signum() == br.f_lo.signum() {
            br.lo = mid;
            br.f_lo = f_mid;
        } else {
            br.hi = mid;
            br.f_hi = f_mid;
        }
    }
    Err(Error::Convergence {
        iterations: cfg.max_iter,
        residual: br.best().1.abs(),
    })
}

/// Bisection returning the point with the smaller residual, which must be
/// within `abs_tol`.
pub(crate) fn find_root<F>(func: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let br = bisect(func, lo, hi, cfg)?;
    let (x, fx) = br.best();
    if fx.abs() > cfg.abs_tol {
        return Err(Error::Convergence {
            iterations: cfg.max_iter,
            residual: fx.abs(),
        });
    }
    Ok(x)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `func` on `[a, b]`.
/// Returns `(location, value)`; the endpoints are compared as well, so a
/// monotone function yields its boundary maximum.
pub fn golden_max<F>(mut func: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let fa = func(a);
    let fb = func(b);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = func(x1);
    let mut f2 = func(x2);
    for _ in 0..max_iter {
        if b - a <= xtol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = func(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = func(x1);
        }
    }
    [(a, fa), (b, fb), (x1, f1), (x2, f2)]
        .into_iter()
        .filter(|(_, v)| v.is_finite())
        .fold((a, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}
