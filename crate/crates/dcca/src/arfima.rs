//! Pairs of ARFIMA(0,d,0) series driven by cross-correlated Gaussian
//! innovations.
//!
//! Each series is the moving-average expansion `x_t = Σ_n a_n(d)·ε_{t−n}`
//! with weights `a_n(d) = Γ(n+d)/(Γ(n+1)Γ(d))`, truncated to the available
//! history (`x_t` depends on `ε_1..ε_t`; no burn-in is discarded). The
//! truncation is exact for the non-stationary range `d >= 0.5`, which has no
//! infinite-past representation, and is the standard simulation choice for
//! the stationary range.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{DccaError, Result};

/// Parameters of one generated pair.
///
/// `d1`, `d2` are the fractional differencing orders of the two series
/// (restricted to `(-0.5, 1.5]`, which covers everything from strongly
/// stationary to explosive), `rho` the contemporaneous correlation of the
/// driving innovations, `t` the output length and `seed` the stream seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArfimaParams {
    pub d1: f64,
    pub d2: f64,
    pub rho: f64,
    pub t: usize,
    pub seed: u64,
}

impl ArfimaParams {
    /// Validates all field invariants.
    pub fn new(d1: f64, d2: f64, rho: f64, t: usize, seed: u64) -> Result<Self> {
        for d in [d1, d2] {
            if !d.is_finite() || d <= -0.5 || d > 1.5 {
                return Err(DccaError::OrderOutOfRange(d));
            }
        }
        if !rho.is_finite() || rho.abs() > 1.0 {
            return Err(DccaError::InvalidCorrelation(rho));
        }
        if t < 2 {
            return Err(DccaError::SeriesTooShort { min: 2, len: t });
        }
        Ok(Self { d1, d2, rho, t, seed })
    }
}

/// A pair of i.i.d. standard normal sequences with contemporaneous
/// correlation `rho` between them: `ν_t = ρ·ε_t + sqrt(1−ρ²)·η_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationPair {
    pub eps: Vec<f64>,
    pub nu: Vec<f64>,
}

/// The generated series pair; equal lengths, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Moving-average weights `a_0..a_{n_max}` for order `d`.
///
/// Uses the forward recurrence `a_0 = 1, a_n = a_{n−1}·(n−1+d)/n`, which is
/// algebraically identical to the Gamma ratio `Γ(n+d)/(Γ(n+1)Γ(d))` but does
/// not overflow for large `n`. Errors if `d` is non-finite or `d <= -0.5`
/// (where the process variance diverges).
pub fn ma_coefficients(d: f64, n_max: usize) -> Result<Vec<f64>> {
    if !d.is_finite() || d <= -0.5 {
        return Err(DccaError::InvalidOrder(d));
    }
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(1.0);
    for n in 1..=n_max {
        let prev = coeffs[n - 1];
        coeffs.push(prev * (n as f64 - 1.0 + d) / n as f64);
    }
    Ok(coeffs)
}

/// Draws `t` correlated standard normal innovation pairs, deterministically
/// for a given `seed` (ChaCha8 stream; `ε_t` and `η_t` are drawn
/// interleaved, one pair per time step).
pub fn correlated_innovations(t: usize, rho: f64, seed: u64) -> Result<InnovationPair> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(DccaError::InvalidCorrelation(rho));
    }
    if t < 1 {
        return Err(DccaError::SeriesTooShort { min: 1, len: t });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orth = (1.0 - rho * rho).sqrt();
    let mut eps = Vec::with_capacity(t);
    let mut nu = Vec::with_capacity(t);
    for _ in 0..t {
        let e: f64 = StandardNormal.sample(&mut rng);
        let eta: f64 = StandardNormal.sample(&mut rng);
        eps.push(e);
        nu.push(rho * e + orth * eta);
    }
    Ok(InnovationPair { eps, nu })
}

// Truncated MA sum over the available history, oldest term first, so that
// d = 1 reduces bit-exactly to the running cumulative sum.
fn convolve(coeffs: &[f64], innovations: &[f64]) -> Vec<f64> {
    let t = innovations.len();
    let mut out = Vec::with_capacity(t);
    for i in 0..t {
        let mut acc = 0.0;
        for (tau, &e) in innovations[..=i].iter().enumerate() {
            acc += coeffs[i - tau] * e;
        }
        out.push(acc);
    }
    out
}

/// Generates one ARFIMA(0,d,0) pair.
///
/// `x` is driven by `ε`, `y` by `ν`, with the innovation pair drawn exactly
/// as [`correlated_innovations`] for the same `(t, rho, seed)`. Output is
/// deterministic given the parameters. Cost is O(t²) by direct convolution.
pub fn arfima_pair(params: &ArfimaParams) -> Result<SeriesPair> {
    // Re-validate so hand-rolled structs get the same guarantees.
    let params = ArfimaParams::new(params.d1, params.d2, params.rho, params.t, params.seed)?;
    let innovations = correlated_innovations(params.t, params.rho, params.seed)?;
    let a1 = ma_coefficients(params.d1, params.t - 1)?;
    let x = convolve(&a1, &innovations.eps);
    let a2 = if params.d2 == params.d1 {
        a1
    } else {
        ma_coefficients(params.d2, params.t - 1)?
    };
    let y = convolve(&a2, &innovations.nu);
    Ok(SeriesPair { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ma_zeroth_coefficient_is_one() {
        assert_eq!(ma_coefficients(0.4, 0).unwrap(), vec![1.0]);
    }

    #[test]
    fn ma_low_order_closed_forms() {
        // a_1 = d, a_2 = d(d+1)/2
        let a = ma_coefficients(0.4, 2).unwrap();
        assert_eq!(a.len(), 3);
        assert!((a[0] - 1.0).abs() < 1e-15);
        assert!((a[1] - 0.4).abs() < 1e-15);
        assert!((a[2] - 0.28).abs() < 1e-15);
    }

    #[test]
    fn ma_unit_order_is_random_walk() {
        let a = ma_coefficients(1.0, 5).unwrap();
        assert_eq!(a, vec![1.0; 6]);
    }

    #[test]
    fn ma_rejects_divergent_and_non_finite_orders() {
        assert!(ma_coefficients(-0.5, 10).is_err());
        assert!(ma_coefficients(-0.7, 10).is_err());
        assert!(ma_coefficients(f64::NAN, 10).is_err());
        assert!(ma_coefficients(f64::INFINITY, 10).is_err());
        // fine at the other end of the generator's range and beyond
        assert!(ma_coefficients(1.5, 10).is_ok());
    }

    #[test]
    fn ma_coefficients_all_finite_for_grid_orders() {
        for d in [0.1, 0.4, 0.6, 0.9, 1.1, 1.4] {
            let a = ma_coefficients(d, 10_000).unwrap();
            assert!(a.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn innovations_perfectly_correlated_are_identical() {
        let pair = correlated_innovations(256, 1.0, 99).unwrap();
        for (e, n) in pair.eps.iter().zip(&pair.nu) {
            assert_eq!(e, n);
        }
        let anti = correlated_innovations(256, -1.0, 99).unwrap();
        for (e, n) in anti.eps.iter().zip(&anti.nu) {
            assert_eq!(*e, -*n);
        }
    }

    #[test]
    fn innovations_sample_correlation_near_target() {
        // se of the sample correlation is about (1-rho^2)/sqrt(T) ~ 0.0024;
        // the 0.01 check leaves a 4-sigma margin.
        let t = 100_000;
        let pair = correlated_innovations(t, 0.5, 7).unwrap();
        let r = crate::detrend::pearson(&pair.eps, &pair.nu).unwrap();
        assert!((r - 0.5).abs() < 0.01, "sample correlation {r} too far from 0.5");

        let indep = correlated_innovations(t, 0.0, 7).unwrap();
        let r0 = crate::detrend::pearson(&indep.eps, &indep.nu).unwrap();
        assert!(r0.abs() < 0.02, "sample correlation {r0} too far from 0");
    }

    #[test]
    fn innovations_reject_bad_correlation() {
        assert!(correlated_innovations(10, 1.5, 0).is_err());
        assert!(correlated_innovations(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn innovations_deterministic_for_seed() {
        let a = correlated_innovations(64, 0.3, 11).unwrap();
        let b = correlated_innovations(64, 0.3, 11).unwrap();
        assert_eq!(a, b);
        let c = correlated_innovations(64, 0.3, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_order_pair_reproduces_innovations() {
        let params = ArfimaParams::new(0.0, 0.0, 0.4, 128, 5).unwrap();
        let pair = arfima_pair(&params).unwrap();
        let innov = correlated_innovations(128, 0.4, 5).unwrap();
        assert_eq!(pair.x, innov.eps);
        assert_eq!(pair.y, innov.nu);
    }

    #[test]
    fn unit_order_is_cumulative_sum_of_innovations() {
        let params = ArfimaParams::new(1.0, 0.0, 0.2, 200, 9).unwrap();
        let pair = arfima_pair(&params).unwrap();
        let innov = correlated_innovations(200, 0.2, 9).unwrap();
        let mut acc = 0.0;
        for (i, &e) in innov.eps.iter().enumerate() {
            acc += e;
            assert_eq!(pair.x[i], acc, "cumsum mismatch at t = {i}");
        }
    }

    #[test]
    fn pair_is_deterministic_and_finite() {
        let params = ArfimaParams::new(0.9, 1.4, -0.6, 300, 42).unwrap();
        let a = arfima_pair(&params).unwrap();
        let b = arfima_pair(&params).unwrap();
        assert_eq!(a, b);
        assert!(a.x.iter().chain(&a.y).all(|v| v.is_finite()));
    }

    #[test]
    fn convolution_is_linear_in_innovations() {
        let a = ma_coefficients(0.6, 99).unwrap();
        let innov = correlated_innovations(100, 0.0, 3).unwrap();
        let base = convolve(&a, &innov.eps);

        // scaling by a power of two is exact
        let doubled: Vec<f64> = innov.eps.iter().map(|v| 2.0 * v).collect();
        let conv2 = convolve(&a, &doubled);
        for (two_x, x) in conv2.iter().zip(&base) {
            assert_eq!(*two_x, 2.0 * x);
        }

        // arbitrary positive scale holds to rounding
        let scaled: Vec<f64> = innov.eps.iter().map(|v| 3.0 * v).collect();
        let conv3 = convolve(&a, &scaled);
        for (three_x, x) in conv3.iter().zip(&base) {
            assert!((three_x - 3.0 * x).abs() <= 1e-12 * three_x.abs().max(1.0));
        }
    }

    #[test]
    fn params_validation_bounds() {
        assert!(ArfimaParams::new(1.5, 0.1, 0.0, 10, 0).is_ok());
        assert!(ArfimaParams::new(1.51, 0.1, 0.0, 10, 0).is_err());
        assert!(ArfimaParams::new(-0.5, 0.1, 0.0, 10, 0).is_err());
        assert!(ArfimaParams::new(0.1, 0.1, -1.01, 10, 0).is_err());
        assert!(ArfimaParams::new(0.1, 0.1, 0.0, 1, 0).is_err());
    }
}
