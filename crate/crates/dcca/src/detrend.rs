//! Profiles, box partitioning, per-box linear detrending and the
//! detrended fluctuation machinery behind the DCCA coefficient.
//!
//! The coefficient for two series at a window scale `s` is
//! `rho = F²_dcca(s) / (F_dfa_x(s) · F_dfa_y(s))`, where the `F²` terms are
//! detrended (co)variances of the series profiles averaged over boxes of
//! length `s`. All indices are 1-based in the formulas; the implementation
//! is 0-based.

use crate::error::{DccaError, Result};

/// How boxes of length `s` are laid over a profile of length `T`.
///
/// `NonOverlapping` is the default used by the Monte Carlo harness: when `s`
/// divides `T` the boxes tile the profile exactly (`T/s` boxes); otherwise
/// `⌊T/s⌋` boxes are anchored at the start and another `⌊T/s⌋` at the end,
/// giving `2⌊T/s⌋` boxes in total. `Overlapping` slides the window one step
/// at a time (`T−s+1` boxes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxMode {
    Overlapping,
    #[default]
    NonOverlapping,
}

impl std::fmt::Display for BoxMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoxMode::Overlapping => write!(f, "overlapping"),
            BoxMode::NonOverlapping => write!(f, "non-overlapping"),
        }
    }
}

/// Cumulative sum of a demeaned series: `X_t = Σ_{i<=t} (x_i − x̄)`.
///
/// The last element is zero up to accumulated rounding because the demeaned
/// terms sum to zero by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
}

impl Profile {
    /// The profile values, same length as the source series.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Builds the profile of a series.
///
/// Errors on fewer than two observations or any non-finite value.
pub fn profile(x: &[f64]) -> Result<Profile> {
    ensure_finite(x)?;
    if x.len() < 2 {
        return Err(DccaError::SeriesTooShort { min: 2, len: x.len() });
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let mut acc = 0.0;
    let values = x
        .iter()
        .map(|&v| {
            acc += v - mean;
            acc
        })
        .collect();
    Ok(Profile { values })
}

fn ensure_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(DccaError::NonFinite { index }),
        None => Ok(()),
    }
}

/// The set of boxes of length `s` laid over a profile, see [`BoxMode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxPartition {
    starts: Vec<usize>,
    s: usize,
    mode: BoxMode,
}

impl BoxPartition {
    /// 0-based start index of every box, in canonical order (start-anchored
    /// boxes ascending, then end-anchored boxes ascending).
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Window scale `s` shared by all boxes.
    pub fn scale(&self) -> usize {
        self.s
    }

    pub fn mode(&self) -> BoxMode {
        self.mode
    }

    /// Number of boxes.
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Boxes as `(start, length)` windows.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.starts.iter().map(move |&j| (j, self.s))
    }
}

/// Lays boxes of length `s` over a series of length `len`.
///
/// Requires `4 <= s <= len`; a two-parameter line fit on fewer than four
/// points leaves too few residual degrees of freedom to be useful.
pub fn partition(len: usize, s: usize, mode: BoxMode) -> Result<BoxPartition> {
    if s < 4 || s > len {
        return Err(DccaError::InvalidScale { s, len });
    }
    let starts = match mode {
        BoxMode::Overlapping => (0..=len - s).collect(),
        BoxMode::NonOverlapping => {
            let q = len / s;
            if len.is_multiple_of(s) {
                // Start- and end-anchored tilings coincide; count each box once.
                (0..q).map(|b| b * s).collect()
            } else {
                let mut starts: Vec<usize> = (0..q).map(|b| b * s).collect();
                starts.extend((1..=q).rev().map(|b| len - b * s));
                starts
            }
        }
    };
    Ok(BoxPartition { starts, s, mode })
}

/// Ordinary least-squares line over the in-box time index, in local
/// coordinates `k = 0..s-1`. Returns `(intercept, slope)`.
fn fit_line(window: &[f64]) -> (f64, f64) {
    let s = window.len() as f64;
    let k_mean = (s - 1.0) / 2.0;
    // Σ (k − k̄)² has the closed form s(s²−1)/12 for equally spaced k.
    let skk = s * (s * s - 1.0) / 12.0;
    let mut v_sum = 0.0;
    let mut cross = 0.0;
    for (k, &v) in window.iter().enumerate() {
        v_sum += v;
        cross += (k as f64 - k_mean) * v;
    }
    let slope = cross / skk;
    let intercept = v_sum / s - slope * k_mean;
    (intercept, slope)
}

/// Fitted values of the least-squares time trend over one box.
///
/// `values` are profile values, `start` is the 0-based box start. Panics if
/// the box does not lie within `values` or `len < 2`; the time-index
/// regressor itself is never degenerate for `len >= 2`.
pub fn box_fit(values: &[f64], start: usize, len: usize) -> Vec<f64> {
    assert!(len >= 2, "box_fit needs at least 2 points, got {len}");
    assert!(
        start + len <= values.len(),
        "box [{start}, {start}+{len}) out of bounds for profile of length {}",
        values.len()
    );
    let (intercept, slope) = fit_line(&values[start..start + len]);
    (0..len).map(|k| intercept + slope * k as f64).collect()
}

/// Detrended variances and covariance of two profiles at scale `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationPair {
    /// `F²_dfa` of the first series; non-negative.
    pub f2_dfa_x: f64,
    /// `F²_dfa` of the second series; non-negative.
    pub f2_dfa_y: f64,
    /// `F²_dcca`, sign-carrying; `f2_dcca² <= f2_dfa_x · f2_dfa_y`.
    pub f2_dcca: f64,
    /// Scale the fluctuations were computed at.
    pub s: usize,
}

// Neumaier variant of compensated summation; the harness averages over up to
// T−s+1 boxes, where naive accumulation loses digits.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.compensation += if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.compensation
    }
}

/// Computes both DFA fluctuations and the DCCA fluctuation in one pass.
///
/// Per box, residuals around the fitted time trend are accumulated as
/// `Σ r²_x/(s−1)`, `Σ r²_y/(s−1)` and `Σ r_x·r_y/(s−1)`; the per-box values
/// are then averaged over all boxes with compensated summation. This is the
/// single code path behind [`dfa_fluctuation`], [`dcca_fluctuation`] and
/// [`rho_dcca`], which keeps `dcca_fluctuation(x, x, s)` bit-identical to
/// `dfa_fluctuation(x, s)`.
pub fn fluctuations(x: &[f64], y: &[f64], s: usize, mode: BoxMode) -> Result<FluctuationPair> {
    if x.len() != y.len() {
        return Err(DccaError::LengthMismatch { x: x.len(), y: y.len() });
    }
    let px = profile(x)?;
    let py = profile(y)?;
    let part = partition(x.len(), s, mode)?;
    let px = px.values();
    let py = py.values();

    let sm1 = (s - 1) as f64;
    let mut acc_xx = KahanSum::default();
    let mut acc_yy = KahanSum::default();
    let mut acc_xy = KahanSum::default();
    for &j in part.starts() {
        let wx = &px[j..j + s];
        let wy = &py[j..j + s];
        let (ax, bx) = fit_line(wx);
        let (ay, by) = fit_line(wy);
        let mut sxx = 0.0;
        let mut syy = 0.0;
        let mut sxy = 0.0;
        for k in 0..s {
            let kf = k as f64;
            let rx = wx[k] - (ax + bx * kf);
            let ry = wy[k] - (ay + by * kf);
            sxx += rx * rx;
            syy += ry * ry;
            sxy += rx * ry;
        }
        acc_xx.add(sxx / sm1);
        acc_yy.add(syy / sm1);
        acc_xy.add(sxy / sm1);
    }

    let boxes = part.len() as f64;
    Ok(FluctuationPair {
        f2_dfa_x: acc_xx.total() / boxes,
        f2_dfa_y: acc_yy.total() / boxes,
        f2_dcca: acc_xy.total() / boxes,
        s,
    })
}

/// DFA fluctuation `F²_dfa(s)`: detrended variance of the profile of `x`,
/// averaged over all boxes. Always non-negative.
pub fn dfa_fluctuation(x: &[f64], s: usize, mode: BoxMode) -> Result<f64> {
    Ok(fluctuations(x, x, s, mode)?.f2_dfa_x)
}

/// DCCA fluctuation `F²_dcca(s)`: detrended covariance of the two profiles,
/// averaged over all boxes. May be negative.
pub fn dcca_fluctuation(x: &[f64], y: &[f64], s: usize, mode: BoxMode) -> Result<f64> {
    Ok(fluctuations(x, y, s, mode)?.f2_dcca)
}

/// The DCCA cross-correlation coefficient at scale `s`.
///
/// `rho = F²_dcca / sqrt(F²_dfa_x · F²_dfa_y)`, guaranteed to lie in
/// `[-1, 1]` (Cauchy–Schwarz over the pooled box residuals; the result is
/// clamped to shed float excess at the boundaries). Errors with
/// [`DccaError::DegenerateInput`] when either DFA fluctuation is zero,
/// i.e. the profile is exactly linear in every box.
pub fn rho_dcca(x: &[f64], y: &[f64], s: usize, mode: BoxMode) -> Result<f64> {
    let f = fluctuations(x, y, s, mode)?;
    if f.f2_dfa_x <= 0.0 {
        return Err(DccaError::DegenerateInput { quantity: "F²_DFA,x" });
    }
    if f.f2_dfa_y <= 0.0 {
        return Err(DccaError::DegenerateInput { quantity: "F²_DFA,y" });
    }
    let rho = f.f2_dcca / (f.f2_dfa_x * f.f2_dfa_y).sqrt();
    Ok(rho.clamp(-1.0, 1.0))
}

/// Pearson's product-moment correlation of the raw series (not profiles).
///
/// Errors on length mismatch, fewer than two observations, non-finite
/// values, or zero variance in either series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(DccaError::LengthMismatch { x: x.len(), y: y.len() });
    }
    if x.len() < 2 {
        return Err(DccaError::SeriesTooShort { min: 2, len: x.len() });
    }
    ensure_finite(x)?;
    ensure_finite(y)?;

    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 {
        return Err(DccaError::DegenerateInput { quantity: "Var(x)" });
    }
    if syy <= 0.0 {
        return Err(DccaError::DegenerateInput { quantity: "Var(y)" });
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EIGHT_X: [f64; 8] = [0.5, -1.2, 0.3, 2.1, -0.7, 1.1, 0.2, -0.4];
    const EIGHT_Y: [f64; 8] = [1.0, 0.4, -0.6, 0.9, 1.8, -1.1, 0.55, 0.0];

    // Expected fluctuations for the eight-point fixtures at s = 4, frozen
    // from an independent explicit-loop evaluation of the defining sums
    // (see the acceptance suite's oracle for the live cross-check).
    const EIGHT_DFA_NONOVERLAP: f64 = 0.549;
    const EIGHT_DFA_OVERLAP: f64 = 0.4318;
    const EIGHT_DCCA_NONOVERLAP: f64 = 0.00075;
    const EIGHT_DCCA_OVERLAP: f64 = -0.11513333333333334;

    fn random_series(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.random_range(-10.0..10.0)).collect()
    }

    #[test]
    fn profile_demeans_and_accumulates() {
        // mean 2; running sums of the demeaned values -1, 0, 1
        assert_eq!(profile(&[1.0, 2.0, 3.0]).unwrap().values(), &[-1.0, -1.0, 0.0]);
        assert_eq!(profile(&[2.0, -1.0, 3.0, 0.0]).unwrap().values(), &[1.0, -1.0, 1.0, 0.0]);
    }

    #[test]
    fn profile_of_constant_series_is_zero() {
        let p = profile(&[4.25; 16]).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn profile_final_element_vanishes_up_to_rounding() {
        let x = random_series(5000, 1);
        let max_abs = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let p = profile(&x).unwrap();
        let bound = x.len() as f64 * 1e-12 * max_abs;
        assert!(p.values().last().unwrap().abs() <= bound);
    }

    #[test]
    fn profile_rejects_short_or_non_finite_input() {
        assert!(matches!(profile(&[1.0]), Err(DccaError::SeriesTooShort { .. })));
        assert!(matches!(
            profile(&[1.0, f64::NAN, 2.0]),
            Err(DccaError::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn partition_tiles_exactly_when_scale_divides_length() {
        let p = partition(1000, 200, BoxMode::NonOverlapping).unwrap();
        assert_eq!(p.starts(), &[0, 200, 400, 600, 800]);
        assert_eq!(p.scale(), 200);
    }

    #[test]
    fn partition_uneven_length_anchors_both_ends() {
        let p = partition(1000, 7, BoxMode::NonOverlapping).unwrap();
        assert_eq!(p.len(), 284); // 2 * floor(1000 / 7)
        let (begin, end) = p.starts().split_at(142);
        assert_eq!(begin[0], 0);
        assert_eq!(begin[141], 141 * 7);
        assert_eq!(end[0], 1000 - 142 * 7);
        assert_eq!(end[141], 1000 - 7);
        for (start, len) in p.boxes() {
            assert!(start + len <= 1000);
        }
    }

    #[test]
    fn partition_overlapping_slides_one_step() {
        let p = partition(100, 10, BoxMode::Overlapping).unwrap();
        assert_eq!(p.len(), 91);
        assert_eq!(p.starts().first(), Some(&0));
        assert_eq!(p.starts().last(), Some(&90));
    }

    #[test]
    fn partition_rejects_out_of_range_scales() {
        assert!(matches!(
            partition(100, 3, BoxMode::NonOverlapping),
            Err(DccaError::InvalidScale { s: 3, len: 100 })
        ));
        assert!(partition(100, 101, BoxMode::Overlapping).is_err());
        assert!(partition(100, 4, BoxMode::NonOverlapping).is_ok());
        assert!(partition(100, 100, BoxMode::NonOverlapping).is_ok());
    }

    #[test]
    fn box_fit_matches_closed_form_on_quadratic() {
        // values k^2 over k = 1..5; the least-squares line is 6k - 7
        let fitted = box_fit(&[1.0, 4.0, 9.0, 16.0, 25.0], 0, 5);
        assert_eq!(fitted, vec![-1.0, 5.0, 11.0, 17.0, 23.0]);
    }

    #[test]
    fn box_fit_interpolates_two_points() {
        assert_eq!(box_fit(&[3.0, 7.0], 0, 2), vec![3.0, 7.0]);
    }

    #[test]
    fn box_fit_reproduces_linear_values() {
        let values: Vec<f64> = (0..10).map(|k| 2.0 + 3.0 * k as f64).collect();
        assert_eq!(box_fit(&values, 2, 6), values[2..8].to_vec());
    }

    #[test]
    #[should_panic(expected = "out of bounds")]
    fn box_fit_panics_out_of_bounds() {
        box_fit(&[1.0, 2.0, 3.0], 1, 3);
    }

    #[test]
    fn dfa_of_constant_series_is_zero() {
        // the profile is identically zero, hence exactly linear in every box
        assert_eq!(dfa_fluctuation(&[3.25; 24], 4, BoxMode::NonOverlapping).unwrap(), 0.0);
        assert_eq!(dfa_fluctuation(&[3.25; 24], 6, BoxMode::Overlapping).unwrap(), 0.0);
    }

    #[test]
    fn dfa_is_nonnegative() {
        for seed in 0..20 {
            let x = random_series(61, seed);
            for s in [4, 5, 9, 30] {
                for mode in [BoxMode::Overlapping, BoxMode::NonOverlapping] {
                    assert!(dfa_fluctuation(&x, s, mode).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn dfa_eight_point_fixture() {
        let non = dfa_fluctuation(&EIGHT_X, 4, BoxMode::NonOverlapping).unwrap();
        assert!((non - EIGHT_DFA_NONOVERLAP).abs() < 1e-12, "got {non}");
        let over = dfa_fluctuation(&EIGHT_X, 4, BoxMode::Overlapping).unwrap();
        assert!((over - EIGHT_DFA_OVERLAP).abs() < 1e-12, "got {over}");
    }

    #[test]
    fn dcca_eight_point_fixture() {
        let non = dcca_fluctuation(&EIGHT_X, &EIGHT_Y, 4, BoxMode::NonOverlapping).unwrap();
        assert!((non - EIGHT_DCCA_NONOVERLAP).abs() < 1e-12, "got {non}");
        let over = dcca_fluctuation(&EIGHT_X, &EIGHT_Y, 4, BoxMode::Overlapping).unwrap();
        assert!((over - EIGHT_DCCA_OVERLAP).abs() < 1e-12, "got {over}");
    }

    #[test]
    fn dcca_of_series_with_itself_is_dfa_bit_exact() {
        let x = random_series(120, 3);
        for s in [4, 7, 30] {
            for mode in [BoxMode::Overlapping, BoxMode::NonOverlapping] {
                let dfa = dfa_fluctuation(&x, s, mode).unwrap();
                assert_eq!(dcca_fluctuation(&x, &x, s, mode).unwrap(), dfa);
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                assert_eq!(dcca_fluctuation(&x, &neg, s, mode).unwrap(), -dfa);
            }
        }
    }

    #[test]
    fn rho_perfect_and_anti_correlation() {
        let x = random_series(200, 9);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        for s in [4, 10, 50] {
            for mode in [BoxMode::Overlapping, BoxMode::NonOverlapping] {
                assert!((rho_dcca(&x, &x, s, mode).unwrap() - 1.0).abs() < 1e-12);
                assert!((rho_dcca(&x, &neg, s, mode).unwrap() + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rho_degenerate_inputs_name_the_zero_term() {
        let x = random_series(40, 4);
        let constant = vec![1.0; 40];
        match rho_dcca(&constant, &x, 5, BoxMode::NonOverlapping) {
            Err(DccaError::DegenerateInput { quantity }) => assert_eq!(quantity, "F²_DFA,x"),
            other => panic!("expected degenerate error, got {other:?}"),
        }
        match rho_dcca(&x, &constant, 5, BoxMode::NonOverlapping) {
            Err(DccaError::DegenerateInput { quantity }) => assert_eq!(quantity, "F²_DFA,y"),
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn rho_rejects_length_mismatch() {
        assert!(matches!(
            rho_dcca(&[1.0; 10], &[1.0; 11], 4, BoxMode::NonOverlapping),
            Err(DccaError::LengthMismatch { x: 10, y: 11 })
        ));
    }

    #[test]
    fn pearson_identity_and_affine() {
        let x = random_series(64, 5);
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let z: Vec<f64> = x.iter().map(|v| -0.5 * v + 1.0).collect();
        assert!((pearson(&x, &z).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_rejects_zero_variance() {
        let x = random_series(32, 6);
        assert!(matches!(
            pearson(&vec![2.0; 32], &x),
            Err(DccaError::DegenerateInput { quantity: "Var(x)" })
        ));
        assert!(matches!(
            pearson(&x, &vec![2.0; 32]),
            Err(DccaError::DegenerateInput { quantity: "Var(y)" })
        ));
    }

    #[test]
    fn pearson_matches_textbook_two_pass_formula() {
        let x = random_series(512, 7);
        let y = random_series(512, 8);
        // independent explicit-loop evaluation
        let n = x.len() as f64;
        let mut mx = 0.0;
        let mut my = 0.0;
        for i in 0..x.len() {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        let mut sxy = 0.0;
        for i in 0..x.len() {
            sxx += (x[i] - mx) * (x[i] - mx);
            syy += (y[i] - my) * (y[i] - my);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        let expected = sxy / (sxx.sqrt() * syy.sqrt());
        assert!((pearson(&x, &y).unwrap() - expected).abs() < 1e-12);
    }

    // series, scale and mode strategy for the property tests
    fn series_pair_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, usize, BoxMode)> {
        (8usize..48, any::<u32>(), prop::bool::ANY).prop_flat_map(|(len, s_raw, overlapping)| {
            let mode = if overlapping { BoxMode::Overlapping } else { BoxMode::NonOverlapping };
            let s = 4 + (s_raw as usize) % (len - 3);
            (
                prop::collection::vec(-50.0..50.0f64, len),
                prop::collection::vec(-50.0..50.0f64, len),
                Just(s),
                Just(mode),
            )
        })
    }

    proptest! {
        #[test]
        fn prop_partition_boxes_cover_and_count(
            len in 8usize..400,
            s_raw in any::<u32>(),
            overlapping in prop::bool::ANY,
        ) {
            let s = 4 + (s_raw as usize) % (len - 3);
            let mode = if overlapping { BoxMode::Overlapping } else { BoxMode::NonOverlapping };
            let part = partition(len, s, mode).unwrap();
            let expected = match mode {
                BoxMode::Overlapping => len - s + 1,
                BoxMode::NonOverlapping if len % s == 0 => len / s,
                BoxMode::NonOverlapping => 2 * (len / s),
            };
            prop_assert_eq!(part.len(), expected);
            for (start, width) in part.boxes() {
                prop_assert!(start + width <= len);
            }
            // the first box starts at the beginning, the last ends at T
            prop_assert_eq!(part.starts()[0], 0);
            prop_assert_eq!(part.starts().last().unwrap() + s, len);
        }

        #[test]
        fn prop_rho_is_bounded((x, y, s, mode) in series_pair_strategy()) {
            if let Ok(rho) = rho_dcca(&x, &y, s, mode) {
                prop_assert!((-1.0..=1.0).contains(&rho));
            }
        }

        #[test]
        fn prop_rho_is_symmetric((x, y, s, mode) in series_pair_strategy()) {
            let a = rho_dcca(&x, &y, s, mode);
            let b = rho_dcca(&y, &x, s, mode);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn prop_rho_flips_sign_with_y((x, y, s, mode) in series_pair_strategy()) {
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            if let (Ok(a), Ok(b)) = (rho_dcca(&x, &y, s, mode), rho_dcca(&x, &neg, s, mode)) {
                prop_assert_eq!(a, -b);
            }
        }

        #[test]
        fn prop_rho_is_affine_invariant(
            (x, y, s, mode) in series_pair_strategy(),
            a in 0.25..4.0f64,
            b in -10.0..10.0f64,
            c in 0.25..4.0f64,
            e in -10.0..10.0f64,
        ) {
            let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let yt: Vec<f64> = y.iter().map(|v| c * v + e).collect();
            if let (Ok(base), Ok(scaled)) = (rho_dcca(&x, &y, s, mode), rho_dcca(&xt, &yt, s, mode)) {
                prop_assert!((base - scaled).abs() < 1e-10);
            }
        }

        #[test]
        fn prop_fluctuations_satisfy_cauchy_schwarz((x, y, s, mode) in series_pair_strategy()) {
            let f = fluctuations(&x, &y, s, mode).unwrap();
            prop_assert!(f.f2_dfa_x >= 0.0);
            prop_assert!(f.f2_dfa_y >= 0.0);
            let bound = f.f2_dfa_x * f.f2_dfa_y;
            prop_assert!(f.f2_dcca * f.f2_dcca <= bound * (1.0 + 1e-12) + 1e-300);
        }
    }
}
