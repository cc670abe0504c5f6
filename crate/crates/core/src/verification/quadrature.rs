//! Graded-mesh quadrature of `∫_0^k ((1/t) ∫_0^t g)^p dt` that only samples
//! `g` pointwise.
//!
//! The mesh is `k 2^{-j-1} ≤ t ≤ k 2^{-j}`, `j = 0..LEVELS`. Each panel is
//! integrated with a fixed Gauss-Legendre rule, both for the inner masses of
//! `g` and for the outer integrand. Below the last panel the contributions
//! are summed as a geometric series whose ratio is read off the last two
//! panels; for a power-law singularity that ratio is the same on every
//! panel, so the extrapolation is exact up to rounding.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::extremizer::ExtremalFunction;

/// Number of halving panels below `k`.
pub const LEVELS: usize = 60;

/// Uniform panels used on `[g.k, k]` when the outer limit exceeds the head.
const TAIL_PANELS: usize = 32;

const HIGH_ORDER: usize = 20;
const LOW_ORDER: usize = 12;

pub(crate) fn rule(order: usize) -> &'static GaussLegendre {
    static HIGH: OnceLock<GaussLegendre> = OnceLock::new();
    static LOW: OnceLock<GaussLegendre> = OnceLock::new();
    static CELL: OnceLock<GaussLegendre> = OnceLock::new();
    let cell = match order {
        HIGH_ORDER => &HIGH,
        LOW_ORDER => &LOW,
        _ => &CELL,
    };
    cell.get_or_init(|| GaussLegendre::new(order).expect("valid Gauss-Legendre order"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyQuadrature {
    pub value: f64,
    /// Difference between two rule orders plus the change in the geometric
    /// tail when the deepest panel is dropped.
    pub error_estimate: f64,
}

/// Numerical value of the Hardy functional of `g` over `(0, k]`. Fails with
/// [`Error::Accuracy`] when the error estimate exceeds `tol` relative.
pub fn quadrature_hardy(g: &ExtremalFunction, k: f64, tol: f64) -> Result<f64> {
    let q = quadrature_hardy_estimate(g, k)?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            expected: "tol > 0",
        });
    }
    if q.error_estimate > tol * q.value.abs() {
        return Err(Error::Accuracy {
            estimate: q.error_estimate / q.value.abs(),
            tol,
        });
    }
    Ok(q.value)
}

pub fn quadrature_hardy_estimate(g: &ExtremalFunction, k: f64) -> Result<HardyQuadrature> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "(0, 1]",
        });
    }
    let high = graded(g, k, rule(HIGH_ORDER))?;
    let low = graded(g, k, rule(LOW_ORDER))?;
    Ok(HardyQuadrature {
        value: high.value,
        error_estimate: (high.value - low.value).abs() + high.tail_drift,
    })
}

struct Graded {
    value: f64,
    tail_drift: f64,
}

/// `last · r / (1 - r)` with `r = last / prev`.
fn geometric_tail(prev: f64, last: f64) -> Result<f64> {
    if last == 0.0 {
        return Ok(0.0);
    }
    let r = last / prev;
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(Error::Accuracy {
            estimate: r,
            tol: 1.0,
        });
    }
    Ok(last * r / (1.0 - r))
}

fn graded(g: &ExtremalFunction, k: f64, rule: &GaussLegendre) -> Result<Graded> {
    let p = g.p();
    let top = k.min(g.k());
    let edge = |j: usize| top * 0.5f64.powi(j as i32);
    let gv = |t: f64| g.value_at(t);

    // inner masses of g on each panel, deepest last
    let masses: Vec<f64> = (0..LEVELS)
        .map(|j| rule.integrate(edge(j + 1), edge(j), gv))
        .collect();
    let inner_tail = geometric_tail(masses[LEVELS - 2], masses[LEVELS - 1])?;

    // below[j] = ∫_0^{edge(j+1)} g
    let mut below = vec![0.0; LEVELS];
    let mut acc = inner_tail;
    for j in (0..LEVELS).rev() {
        below[j] = acc;
        acc += masses[j];
    }
    let head_mass = acc;

    let outer = |lo: f64, hi: f64, base: f64| {
        rule.integrate(lo, hi, |t| {
            let inner = base + rule.integrate(lo, t, gv);
            (inner / t).powf(p)
        })
    };
    let panels: Vec<f64> = (0..LEVELS)
        .map(|j| outer(edge(j + 1), edge(j), below[j]))
        .collect();
    let tail_l = geometric_tail(panels[LEVELS - 2], panels[LEVELS - 1])?;
    let tail_l1 = geometric_tail(panels[LEVELS - 3], panels[LEVELS - 2])?;
    let sum_all: f64 = panels.iter().rev().sum();
    let sum_short = sum_all - panels[LEVELS - 1];
    let head_value = sum_all + tail_l;
    let tail_drift = (head_value - (sum_short + tail_l1)).abs();

    // outer limit beyond the head: uniform panels on [top, k]
    let mut value = head_value;
    if k > top {
        let h = (k - top) / TAIL_PANELS as f64;
        let mut base = head_mass;
        for i in 0..TAIL_PANELS {
            let lo = top + h * i as f64;
            let hi = if i + 1 == TAIL_PANELS { k } else { lo + h };
            value += outer(lo, hi, base);
            base += rule.integrate(lo, hi, gv);
        }
    }
    Ok(Graded { value, tail_drift })
}
