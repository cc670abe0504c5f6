use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremizer::ExtremalFunction;
use crate::kernels::Exponent;
use crate::verification::quadrature::rule;

/// A nonnegative step function on `(0, 1]` with `n` equal cells; `values[i]`
/// is its value on `(i/n, (i+1)/n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParams(
                "step function needs at least one cell".into(),
            ));
        }
        if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain {
                name: "cell value",
                value: bad,
                expected: "finite and >= 0",
            });
        }
        Ok(StepFunction { values })
    }

    /// Like [`StepFunction::new`], additionally requiring `values` to be
    /// nonincreasing.
    pub fn nonincreasing(values: Vec<f64>) -> Result<Self> {
        let s = Self::new(values)?;
        if !s.is_nonincreasing() {
            return Err(Error::InvalidParams(
                "cell values must be nonincreasing".into(),
            ));
        }
        Ok(s)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// `∫_0^1 φ`.
    pub fn l1(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// `∫_0^1 φ^p`.
    pub fn lp(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.powf(p)).sum::<f64>() / self.len() as f64
    }
}

/// Cell averages of `g` on `n` equal cells; preserves `∫g` up to rounding.
/// Cells inside the tail get `c` exactly, and a running minimum removes
/// rounding noise so the result is nonincreasing.
pub fn discretize(g: &ExtremalFunction, n: usize) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let nf = n as f64;
    let k = g.k();
    let mut floor = f64::INFINITY;
    let values = (0..n)
        .map(|i| {
            let t0 = i as f64 / nf;
            let t1 = (i + 1) as f64 / nf;
            let v = if t0 >= k {
                g.c
            } else {
                ((g.cumulative(t1) - g.cumulative(t0)) * nf).max(0.0)
            };
            floor = floor.min(v);
            floor
        })
        .collect();
    StepFunction::new(values)
}

const CELL_ORDER: usize = 10;
const CELL_RTOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 30;

/// `∫_0^k ((1/t) ∫_0^t φ)^p dt` for a step function.
///
/// On a cell starting at `t0 > 0` the integrand is `((C + v (t - t0))/t)^p`,
/// which is smooth; each cell is integrated with Gauss-Legendre and bisected
/// until two levels agree to `1e-10` relative. The first cell contributes
/// `v^p · min(1/n, k)` exactly.
pub fn discrete_hardy(phi: &StepFunction, p: Exponent, k: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "(0, 1]",
        });
    }
    let p = p.get();
    let n = phi.len();
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    let mut mass = 0.0;
    for (i, &v) in phi.values().iter().enumerate() {
        let t0 = i as f64 * h;
        if t0 >= k {
            break;
        }
        let t1 = ((i + 1) as f64 * h).min(k);
        if i == 0 {
            total += v.powf(p) * t1;
        } else {
            let c = mass;
            let integrand = |t: f64| ((c + v * (t - t0)) / t).powf(p);
            total += adaptive_cell(&integrand, t0, t1, 0);
        }
        mass += v * h;
    }
    Ok(total)
}

fn adaptive_cell<F: Fn(f64) -> f64>(func: &F, a: f64, b: f64, depth: u32) -> f64 {
    let gl = rule(CELL_ORDER);
    let whole = gl.integrate(a, b, func);
    let mid = 0.5 * (a + b);
    let halves = gl.integrate(a, mid, func) + gl.integrate(mid, b, func);
    if depth >= MAX_DEPTH || (halves - whole).abs() <= CELL_RTOL * halves.abs() {
        return halves;
    }
    adaptive_cell(func, a, mid, depth + 1) + adaptive_cell(func, mid, b, depth + 1)
}
