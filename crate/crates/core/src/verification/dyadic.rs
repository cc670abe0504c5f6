//! The dyadic maximal operator on `[0, 1]` for functions constant on the
//! cells of a `2^N` grid.

use crate::bellman::{bellman_closed, Params};
use crate::error::{Error, Result};
use crate::kernels::Exponent;
use crate::verification::step::StepFunction;

/// `(M'φ)(x) = max` over dyadic `Q ∋ x` of the average of `φ` on `Q`.
/// Cells of the `2^N` grid are the smallest intervals; all `N + 1` ancestors
/// of each cell are examined.
pub fn dyadic_maximal(phi: &StepFunction) -> Result<StepFunction> {
    let n = phi.len();
    if !n.is_power_of_two() {
        return Err(Error::Size(n));
    }
    let mut level: Vec<f64> = phi.values().to_vec();
    let mut best = level.clone();
    let mut width = 1;
    while level.len() > 1 {
        level = level.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect();
        width *= 2;
        for (j, &avg) in level.iter().enumerate() {
            for m in &mut best[j * width..(j + 1) * width] {
                if avg > *m {
                    *m = avg;
                }
            }
        }
    }
    StepFunction::new(best)
}

/// The largest `∫_K m^p` over sets of measure `k`: the top cells of `m^p`,
/// with the last one taken fractionally.
pub fn best_k_set_integral(m: &StepFunction, p: Exponent, k: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "(0, 1]",
        });
    }
    let n = m.len();
    let mut powered: Vec<f64> = m.values().iter().map(|v| v.powf(p.get())).collect();
    powered.sort_by(|a, b| b.total_cmp(a));
    let cells = k * n as f64;
    let whole = (cells.floor() as usize).min(n);
    let frac = cells - whole as f64;
    let mut sum: f64 = powered[..whole].iter().sum();
    if whole < n && frac > 0.0 {
        sum += frac * powered[whole];
    }
    Ok(sum / n as f64)
}

/// `(|{M'φ > λ}|, (1/λ) ∫_{M'φ > λ} φ)`; the weak-type inequality says the
/// first is at most the second.
pub fn check_weak_type(phi: &StepFunction, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            name: "lambda",
            value: lambda,
            expected: "lambda > 0",
        });
    }
    let m = dyadic_maximal(phi)?;
    let n = phi.len() as f64;
    let (count, mass) = m
        .values()
        .iter()
        .zip(phi.values())
        .filter(|(mv, _)| **mv > lambda)
        .fold((0usize, 0.0), |(c, s), (_, v)| (c + 1, s + v));
    Ok((count as f64 / n, mass / n / lambda))
}

/// `(∫ (M'φ)^p, (p/(p-1))^p ∫ φ^p)`.
pub fn check_strong_type(phi: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
    let m = dyadic_maximal(phi)?;
    Ok((m.lp(p.get()), p.conjugate().powf(p.get()) * phi.lp(p.get())))
}

/// `(best ∫_K (M'φ)^p over |K| = k, B(∫φ, ∫φ^p, k))`. The Bellman value is a
/// supremum over all `φ` and `K`, so the first never exceeds the second.
pub fn dyadic_bellman_bound(phi: &StepFunction, p: Exponent, k: f64) -> Result<(f64, f64)> {
    let m = dyadic_maximal(phi)?;
    let lhs = best_k_set_integral(&m, p, k)?;
    let f = phi.l1();
    // Jensen guarantees f^p ≤ F; clip rounding so the parameters validate
    let big_f = phi.lp(p.get()).max(f.powf(p.get()));
    let params = Params::with_exponent(p, f, big_f, k)?;
    Ok((lhs, bellman_closed(&params)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sf(v: &[f64]) -> StepFunction {
        StepFunction::new(v.to_vec()).unwrap()
    }

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn maximal_examples() {
        let m = dyadic_maximal(&sf(&[3.0; 8])).unwrap();
        assert!(m.values().iter().all(|&v| v == 3.0));
        let m = dyadic_maximal(&sf(&[4.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(m.values(), &[4.0, 2.0, 1.0, 1.0]);
        assert!(matches!(
            dyadic_maximal(&sf(&[1.0, 2.0, 3.0])),
            Err(Error::Size(3))
        ));
    }

    #[test]
    fn maximal_dominates_phi_and_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<f64> = (0..256).map(|_| rng.gen_range(0.0..3.0)).collect();
        let phi = sf(&v);
        let m = dyadic_maximal(&phi).unwrap();
        let mean = phi.l1();
        for (mv, pv) in m.values().iter().zip(phi.values()) {
            assert!(*mv >= *pv && *mv >= mean - 1e-15);
        }
    }

    #[test]
    fn best_k_examples() {
        let c = sf(&[2.0; 4]);
        assert!((best_k_set_integral(&c, ex(2.0), 0.5).unwrap() - 2.0).abs() < 1e-15);
        let m = sf(&[4.0, 2.0, 1.0, 1.0]);
        assert!((best_k_set_integral(&m, ex(2.0), 0.5).unwrap() - 5.0).abs() < 1e-15);
        assert!((best_k_set_integral(&m, ex(2.0), 1.0).unwrap() - m.lp(2.0)).abs() < 1e-15);
        // 2.5 cells: 16 and 4, plus half of a 1
        assert!((best_k_set_integral(&m, ex(2.0), 0.625).unwrap() - 20.5 / 4.0).abs() < 1e-14);
    }

    #[test]
    fn weak_type_examples() {
        assert_eq!(check_weak_type(&sf(&[2.0; 4]), 1.0).unwrap(), (1.0, 2.0));
        assert_eq!(check_weak_type(&sf(&[2.0; 4]), 2.0).unwrap(), (0.0, 0.0));
        let (l, r) = check_weak_type(&sf(&[4.0, 0.0, 0.0, 0.0]), 1.5).unwrap();
        assert_eq!(l, 0.5);
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        assert!(check_weak_type(&sf(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn strong_type_and_bellman_bound() {
        let phi = sf(&[4.0, 0.0, 0.0, 0.0]);
        let (l, r) = check_strong_type(&phi, ex(2.0)).unwrap();
        assert!((l - 22.0 / 4.0).abs() < 1e-15 && l <= r);
        for k in [0.25, 0.5, 1.0] {
            let (lhs, bound) = dyadic_bellman_bound(&phi, ex(2.0), k).unwrap();
            assert!(lhs <= bound + 1e-9, "{k}: {lhs} {bound}");
        }
    }
}
