//! Independent reference implementations used as test oracles.
//!
//! Everything here is written as plainly as possible — explicit loops,
//! 1-based time indices matching the defining equations, normal-equation
//! least squares, no shared code with the library under test.

#![allow(dead_code)]

/// Profile by definition: `X_t = Σ_{i=1..t} (x_i − x̄)`, each prefix summed
/// from scratch.
pub fn naive_profile(x: &[f64]) -> Vec<f64> {
    let t = x.len();
    let mut mean = 0.0;
    for &v in x {
        mean += v;
    }
    mean /= t as f64;
    let mut profile = vec![0.0; t];
    for i in 0..t {
        let mut acc = 0.0;
        for &v in &x[..=i] {
            acc += v - mean;
        }
        profile[i] = acc;
    }
    profile
}

/// Least-squares line over the 1-based time index via the normal equations;
/// returns the fitted values for the box starting at `start` (0-based).
pub fn naive_box_fit(profile: &[f64], start: usize, s: usize) -> Vec<f64> {
    let mut sum_k = 0.0;
    let mut sum_kk = 0.0;
    let mut sum_v = 0.0;
    let mut sum_kv = 0.0;
    for i in 0..s {
        let k = (start + i + 1) as f64;
        let v = profile[start + i];
        sum_k += k;
        sum_kk += k * k;
        sum_v += v;
        sum_kv += k * v;
    }
    let n = s as f64;
    let slope = (n * sum_kv - sum_k * sum_v) / (n * sum_kk - sum_k * sum_k);
    let intercept = (sum_v - slope * sum_k) / n;
    (0..s).map(|i| intercept + slope * (start + i + 1) as f64).collect()
}

/// Box starts (0-based) for either mode; non-overlapping splits from both
/// ends when `s` does not divide `t`.
pub fn naive_box_starts(t: usize, s: usize, overlapping: bool) -> Vec<usize> {
    if overlapping {
        return (0..=t - s).collect();
    }
    let q = t / s;
    if t.is_multiple_of(s) {
        (0..q).map(|b| b * s).collect()
    } else {
        let mut starts: Vec<usize> = (0..q).map(|b| b * s).collect();
        starts.extend((1..=q).rev().map(|b| t - b * s));
        starts
    }
}

/// `(F²_dfa_x, F²_dfa_y, F²_dcca)` by direct evaluation of the defining
/// sums: per-box residual moments over `s−1`, averaged over boxes.
pub fn naive_fluctuations(x: &[f64], y: &[f64], s: usize, overlapping: bool) -> (f64, f64, f64) {
    let px = naive_profile(x);
    let py = naive_profile(y);
    let starts = naive_box_starts(x.len(), s, overlapping);
    let mut f_xx = 0.0;
    let mut f_yy = 0.0;
    let mut f_xy = 0.0;
    for &j in &starts {
        let fit_x = naive_box_fit(&px, j, s);
        let fit_y = naive_box_fit(&py, j, s);
        let mut s_xx = 0.0;
        let mut s_yy = 0.0;
        let mut s_xy = 0.0;
        for k in 0..s {
            let rx = px[j + k] - fit_x[k];
            let ry = py[j + k] - fit_y[k];
            s_xx += rx * rx;
            s_yy += ry * ry;
            s_xy += rx * ry;
        }
        f_xx += s_xx / (s as f64 - 1.0);
        f_yy += s_yy / (s as f64 - 1.0);
        f_xy += s_xy / (s as f64 - 1.0);
    }
    let boxes = starts.len() as f64;
    (f_xx / boxes, f_yy / boxes, f_xy / boxes)
}

/// The coefficient assembled from the naive fluctuations.
pub fn naive_rho_dcca(x: &[f64], y: &[f64], s: usize, overlapping: bool) -> f64 {
    let (f_xx, f_yy, f_xy) = naive_fluctuations(x, y, s, overlapping);
    f_xy / (f_xx.sqrt() * f_yy.sqrt())
}

/// ARFIMA weight `a_n(d) = Γ(n+d)/(Γ(n+1)Γ(d))` via direct log-Gamma
/// evaluation. Accurate to about `n·ln(n)·1e-16` relative, so only usable
/// for moderate `n`.
pub fn lgamma_ma_coefficient(d: f64, n: usize) -> f64 {
    use statrs::function::gamma::ln_gamma;
    (ln_gamma(n as f64 + d) - ln_gamma(n as f64 + 1.0) - ln_gamma(d)).exp()
}

/// The same log-Gamma ratio in telescoped form:
/// `ln Γ(n+d) − ln Γ(n+1) − ln Γ(d) = Σ_{k=1..n} ln((k−1+d)/k)`,
/// evaluated with compensated summation. Accurate to a few 1e-15 relative
/// for every `n` up to 10^4, where direct f64 log-Gamma differencing is not.
pub fn telescoped_lgamma_ma_coefficients(d: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for k in 1..=n_max {
        let term = ((k as f64 - 1.0 + d) / k as f64).ln();
        // Neumaier update
        let t = sum + term;
        compensation += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        out.push((sum + compensation).exp());
    }
    out
}
