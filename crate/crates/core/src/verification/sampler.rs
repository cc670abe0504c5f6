//! Random nonincreasing step functions with `∫φ = f` and `∫φ^p = F`.
//!
//! A random decreasing profile `w` with mean `f` is mixed with the constant
//! `f`: `θ w + (1-θ) f` keeps the mean and the ordering for every
//! `θ ∈ [0, 1]`, and its `p`-th moment is convex in `θ` with minimum `f^p`
//! at `θ = 0`. Bisection on `θ` then hits `F` whenever the unmixed profile
//! reaches it; otherwise the draw is discarded and a heavier-tailed one
//! tried.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bellman::Params;
use crate::error::{Error, Result};
use crate::kernels::RootConfig;
use crate::search::bisect;
use crate::verification::step::StepFunction;

/// Draws per call before giving up.
pub const MAX_ATTEMPTS: usize = 32;

/// Moment accuracy guaranteed for accepted samples (relative for `F`).
pub const MOMENT_TOL: f64 = 1e-10;

/// The generator for trial `trial` of a run seeded with `seed`. Trials use
/// disjoint ChaCha streams, so they can be drawn in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One admissible step function with `n` cells, drawn from stream 0 of
/// `seed`.
pub fn sample_admissible(params: &Params, n: usize, seed: u64) -> Result<StepFunction> {
    sample_admissible_rng(params, n, &mut trial_rng(seed, 0))
}

pub fn sample_admissible_rng<R: Rng>(
    params: &Params,
    n: usize,
    rng: &mut R,
) -> Result<StepFunction> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "sampler needs n >= 2, got {n}"
        )));
    }
    let (p, f, big_f) = (params.p.get(), params.f, params.big_f);
    if params.is_degenerate() {
        return StepFunction::constant(n, f);
    }
    let cfg = RootConfig::default();
    for attempt in 0..MAX_ATTEMPTS {
        let w = draw_profile(rng, n, f, attempt);
        let moment = |theta: f64| {
            w.iter()
                .map(|&x| (theta * x + (1.0 - theta) * f).powf(p))
                .sum::<f64>()
                / n as f64
        };
        if moment(1.0) < big_f {
            continue;
        }
        let br = bisect(|theta| moment(theta) - big_f, 0.0, 1.0, &cfg)?;
        let (theta, _) = br.best();
        let values: Vec<f64> = w.iter().map(|&x| theta * x + (1.0 - theta) * f).collect();
        let s = StepFunction::nonincreasing(values)?;
        let (l1, lp) = (s.l1(), s.lp(p));
        if (l1 - f).abs() > MOMENT_TOL * f.max(1.0)
            || (lp - big_f).abs() > MOMENT_TOL * big_f.max(1.0)
        {
            continue;
        }
        return Ok(s);
    }
    Err(Error::Rejected {
        attempts: MAX_ATTEMPTS,
        target: big_f,
    })
}

/// Sorted decreasing `u^(-β)` profile, optionally cut to zero after a random
/// index, rescaled to mean `f`. `β` grows with `attempt`.
fn draw_profile<R: Rng>(rng: &mut R, n: usize, f: f64, attempt: usize) -> Vec<f64> {
    let beta_max = 0.5 + 0.25 * attempt as f64;
    let beta = rng.gen_range(0.0..beta_max);
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            u.powf(-beta)
        })
        .collect();
    w.sort_by(|a, b| b.total_cmp(a));
    if rng.gen_bool(0.5) {
        let cut = rng.gen_range(1..=n);
        w[cut..].iter_mut().for_each(|x| *x = 0.0);
    }
    let mean = w.iter().sum::<f64>() / n as f64;
    w.iter_mut().for_each(|x| *x *= f / mean);
    w
}
