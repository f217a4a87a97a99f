//! Monte Carlo harness: sweeps a parameter grid of ARFIMA pairs, evaluates
//! the requested estimators on every replication and aggregates the
//! estimates per cell.
//!
//! A cell is one `(d, rho, T)` combination; all scales and estimators of a
//! cell are evaluated on the same generated pair, replication by
//! replication. Every `(cell, rep)` gets its own seed derived from the base
//! seed, so results are bit-identical no matter how many workers run the
//! sweep or in which order.

use rayon::prelude::*;

use crate::arfima::{arfima_pair, ArfimaParams};
use crate::detrend::{pearson, rho_dcca, BoxMode};
use crate::error::{DccaError, Result};

/// The estimators the harness can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Estimator {
    Dcca,
    Pearson,
}

impl Estimator {
    /// Stable identifier used in CSV output and sorting.
    pub fn id(self) -> &'static str {
        match self {
            Estimator::Dcca => "dcca",
            Estimator::Pearson => "pearson",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Estimator {
    type Err = DccaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dcca" => Ok(Estimator::Dcca),
            "pearson" => Ok(Estimator::Pearson),
            other => Err(DccaError::InvalidGrid(format!(
                "unknown estimator {other:?}, expected \"dcca\" or \"pearson\""
            ))),
        }
    }
}

/// A window scale, either relative to the series length or absolute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScaleSpec {
    /// `s = T·num/den`; must land on an integer for every `T` in the grid.
    Fraction { num: u64, den: u64 },
    /// A fixed scale used for every `T`.
    Absolute(usize),
}

impl ScaleSpec {
    /// Resolves the scale against a concrete series length.
    pub fn resolve(self, t: usize) -> Result<usize> {
        let s = match self {
            ScaleSpec::Fraction { num, den } => {
                if den == 0 {
                    return Err(DccaError::InvalidGrid("scale fraction with zero denominator".into()));
                }
                let scaled = t as u64 * num;
                if !scaled.is_multiple_of(den) {
                    return Err(DccaError::InvalidGrid(format!(
                        "scale fraction {num}/{den} does not yield an integer for T = {t}"
                    )));
                }
                (scaled / den) as usize
            }
            ScaleSpec::Absolute(s) => s,
        };
        if s < 4 || s > t {
            return Err(DccaError::InvalidScale { s, len: t });
        }
        Ok(s)
    }
}

impl std::fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScaleSpec::Fraction { num, den } => write!(f, "{num}/{den}"),
            ScaleSpec::Absolute(s) => write!(f, "{s}"),
        }
    }
}

impl std::str::FromStr for ScaleSpec {
    type Err = DccaError;

    fn from_str(raw: &str) -> Result<Self> {
        let parse_int = |part: &str, what: &str| {
            part.trim().parse::<u64>().map_err(|_| {
                DccaError::InvalidGrid(format!("cannot parse {what} in scale {raw:?}"))
            })
        };
        match raw.split_once('/') {
            Some((num, den)) => Ok(ScaleSpec::Fraction {
                num: parse_int(num, "numerator")?,
                den: parse_int(den, "denominator")?,
            }),
            None => Ok(ScaleSpec::Absolute(parse_int(raw, "scale")? as usize)),
        }
    }
}

/// The full Monte Carlo design: parameter grids, replication count, base
/// seed and the estimators to evaluate.
///
/// The default mirrors the reference study: `d` from 0.1 to 1.4, innovation
/// correlations −0.9..0.9 in steps of 0.1, series lengths 1000 and 5000,
/// scales T/100, T/50, T/10 and T/5, 1000 replications.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub d_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub t_values: Vec<usize>,
    pub scales: Vec<ScaleSpec>,
    pub reps: usize,
    pub base_seed: u64,
    pub estimators: Vec<Estimator>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            d_values: vec![0.1, 0.4, 0.6, 0.9, 1.1, 1.4],
            rho_values: (-9..=9).map(|k| k as f64 / 10.0).collect(),
            t_values: vec![1000, 5000],
            scales: [100, 50, 10, 5]
                .iter()
                .map(|&den| ScaleSpec::Fraction { num: 1, den })
                .collect(),
            reps: 1000,
            base_seed: 0,
            estimators: vec![Estimator::Dcca, Estimator::Pearson],
        }
    }
}

impl GridSpec {
    /// Validates the whole design up front, including that every scale
    /// resolves to an integer `4 <= s <= T` for every `T`.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(DccaError::InvalidGrid(msg));
        if self.d_values.is_empty() || self.rho_values.is_empty() || self.t_values.is_empty() {
            return fail("d, rho and T value lists must all be non-empty".into());
        }
        if self.estimators.is_empty() {
            return fail("at least one estimator must be requested".into());
        }
        let mut seen = self.estimators.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.estimators.len() {
            return fail("duplicate estimator in the estimator list".into());
        }
        if self.reps == 0 {
            return fail("replication count must be at least 1".into());
        }
        for &d in &self.d_values {
            if !d.is_finite() || d <= -0.5 || d > 1.5 {
                return Err(DccaError::OrderOutOfRange(d));
            }
        }
        for &rho in &self.rho_values {
            if !rho.is_finite() || rho.abs() > 1.0 {
                return Err(DccaError::InvalidCorrelation(rho));
            }
        }
        for &t in &self.t_values {
            if t < 2 {
                return Err(DccaError::SeriesTooShort { min: 2, len: t });
            }
        }
        if self.estimators.contains(&Estimator::Dcca) {
            if self.scales.is_empty() {
                return fail("the dcca estimator needs at least one scale".into());
            }
            for &t in &self.t_values {
                for &scale in &self.scales {
                    scale.resolve(t)?;
                }
            }
        }
        Ok(())
    }

    /// Cells in canonical order: `d` outermost, then `rho`, then `T`. The
    /// position in this enumeration is the `cell_index` fed to
    /// [`derive_seed`].
    fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::with_capacity(self.d_values.len() * self.rho_values.len() * self.t_values.len());
        for &d in &self.d_values {
            for &rho in &self.rho_values {
                for &t in &self.t_values {
                    cells.push(Cell { index: cells.len() as u64, d, rho, t });
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    index: u64,
    d: f64,
    rho: f64,
    t: usize,
}

/// Per-cell summary of one estimator at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub estimator: Estimator,
    pub d: f64,
    pub rho_true: f64,
    pub t: usize,
    /// Scale the estimate was computed at; `None` for Pearson, which has no
    /// scale parameter.
    pub s: Option<usize>,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
    pub sd: f64,
    pub reps: usize,
}

/// A cell × estimator combination that could not be aggregated because at
/// least one replication hit a degenerate-input error.
#[derive(Debug, Clone, PartialEq)]
pub struct CellError {
    pub estimator: Estimator,
    pub d: f64,
    pub rho_true: f64,
    pub t: usize,
    pub s: Option<usize>,
    pub failed_reps: usize,
    pub message: String,
}

impl std::fmt::Display for CellError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cell estimator={} d={} rho={} T={}",
            self.estimator, self.d, self.rho_true, self.t
        )?;
        if let Some(s) = self.s {
            write!(f, " s={s}")?;
        }
        write!(f, ": {} of {} reps failed: {}", self.failed_reps, self.failed_reps.max(1), self.message)
    }
}

/// Everything a sweep produces: aggregated rows plus the cells that were
/// aborted, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// Sorted by `(estimator, d, rho_true, T, s)`.
    pub rows: Vec<AggregateRow>,
    pub cell_errors: Vec<CellError>,
}

/// Empirical 2.5%, 50% and 97.5% quantiles plus the sample standard
/// deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
    pub sd: f64,
}

/// Aggregates a non-empty sample.
///
/// Quantiles interpolate linearly between order statistics (position
/// `p(n−1)+1`, 1-based); the standard deviation uses the `n−1` denominator
/// and is defined as 0 for a single observation.
pub fn aggregate(samples: &[f64]) -> Result<Summary> {
    if samples.is_empty() {
        return Err(DccaError::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantile = |p: f64| -> f64 {
        let h = p * (sorted.len() - 1) as f64;
        let lo = h.floor() as usize;
        let frac = h - lo as f64;
        if frac == 0.0 || lo + 1 >= sorted.len() {
            sorted[lo]
        } else {
            sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
        }
    };
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    // a constant sample has sd exactly 0, with no mean-rounding residue
    let constant = sorted.first() == sorted.last();
    let sd = if samples.len() > 1 && !constant {
        (samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Summary { q025: quantile(0.025), median: quantile(0.5), q975: quantile(0.975), sd })
}

// splitmix64 finalizer: a 64-bit bijection with full avalanche.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the RNG seed of one `(cell, rep)` work unit from the base seed.
///
/// Absorbs each input word into the running state and applies the
/// splitmix64 finalizer after each absorption. Because the finalizer is a
/// bijection, two work units of the same cell can never collide, and
/// arbitrary pairs collide only with probability ~2^-64.
pub fn derive_seed(base_seed: u64, cell_index: u64, rep_index: u64) -> u64 {
    let mut h = mix64(base_seed ^ 0x9E37_79B9_7F4A_7C15);
    h = mix64(h ^ cell_index);
    mix64(h ^ rep_index)
}

// Outcome of one replication: one result per requested scale (dcca) plus
// one for Pearson if requested.
struct RepEval {
    dcca: Vec<Result<f64>>,
    pearson: Option<Result<f64>>,
}

/// Runs the full sweep.
///
/// `progress` is invoked after each finished cell with
/// `(cells_done, cells_total)`. Replications run on the rayon pool the
/// caller installs (or the global one); the output is deterministic for a
/// given `base_seed` regardless of worker count and scheduling.
///
/// Returns an error for invalid specs or if any estimate escapes `[-1, 1]`;
/// degenerate-input failures inside a replication abort only the affected
/// cell × estimator and are reported in [`GridResult::cell_errors`].
pub fn run_grid(spec: &GridSpec, progress: &mut dyn FnMut(usize, usize)) -> Result<GridResult> {
    spec.validate()?;
    let cells = spec.cells();
    let total = cells.len();
    let want_dcca = spec.estimators.contains(&Estimator::Dcca);
    let want_pearson = spec.estimators.contains(&Estimator::Pearson);

    let mut rows = Vec::new();
    let mut cell_errors = Vec::new();
    for (done, cell) in cells.iter().enumerate() {
        let scales = if want_dcca {
            let mut scales: Vec<usize> = spec
                .scales
                .iter()
                .map(|scale| scale.resolve(cell.t))
                .collect::<Result<_>>()?;
            scales.sort_unstable();
            scales.dedup();
            scales
        } else {
            Vec::new()
        };

        let evals: Vec<RepEval> = (0..spec.reps)
            .into_par_iter()
            .map(|rep| {
                let seed = derive_seed(spec.base_seed, cell.index, rep as u64);
                evaluate_rep(cell, seed, &scales, want_pearson)
            })
            .collect();

        if want_dcca {
            for (si, &s) in scales.iter().enumerate() {
                let estimates: Vec<&Result<f64>> = evals.iter().map(|e| &e.dcca[si]).collect();
                collect_cell(
                    cell,
                    Estimator::Dcca,
                    Some(s),
                    &estimates,
                    &mut rows,
                    &mut cell_errors,
                )?;
            }
        }
        if want_pearson {
            let estimates: Vec<&Result<f64>> =
                evals.iter().map(|e| e.pearson.as_ref().expect("pearson requested")).collect();
            collect_cell(cell, Estimator::Pearson, None, &estimates, &mut rows, &mut cell_errors)?;
        }
        progress(done + 1, total);
    }

    rows.sort_by(|a, b| {
        a.estimator
            .id()
            .cmp(b.estimator.id())
            .then(a.d.total_cmp(&b.d))
            .then(a.rho_true.total_cmp(&b.rho_true))
            .then(a.t.cmp(&b.t))
            .then(a.s.unwrap_or(0).cmp(&b.s.unwrap_or(0)))
    });
    Ok(GridResult { rows, cell_errors })
}

fn evaluate_rep(cell: &Cell, seed: u64, scales: &[usize], want_pearson: bool) -> RepEval {
    let pair = ArfimaParams::new(cell.d, cell.d, cell.rho, cell.t, seed).and_then(|p| arfima_pair(&p));
    match pair {
        Ok(pair) => RepEval {
            dcca: scales
                .iter()
                .map(|&s| rho_dcca(&pair.x, &pair.y, s, BoxMode::NonOverlapping))
                .collect(),
            pearson: want_pearson.then(|| pearson(&pair.x, &pair.y)),
        },
        // Generation failure poisons every estimator of this replication.
        Err(err) => RepEval {
            dcca: scales.iter().map(|_| Err(err.clone())).collect(),
            pearson: want_pearson.then_some(Err(err)),
        },
    }
}

// Turns the per-rep estimates of one cell × estimator into a row, or
// records a cell error if any replication failed. Estimates outside [-1, 1]
// fail the whole run.
fn collect_cell(
    cell: &Cell,
    estimator: Estimator,
    s: Option<usize>,
    estimates: &[&Result<f64>],
    rows: &mut Vec<AggregateRow>,
    cell_errors: &mut Vec<CellError>,
) -> Result<()> {
    let failed_reps = estimates.iter().filter(|r| r.is_err()).count();
    if failed_reps > 0 {
        let message = estimates
            .iter()
            .find_map(|r| r.as_ref().err())
            .map(|e| e.to_string())
            .unwrap_or_default();
        cell_errors.push(CellError {
            estimator,
            d: cell.d,
            rho_true: cell.rho,
            t: cell.t,
            s,
            failed_reps,
            message,
        });
        return Ok(());
    }
    let samples: Vec<f64> = estimates.iter().map(|r| *r.as_ref().expect("no failures")).collect();
    if let Some(&bad) = samples.iter().find(|v| v.abs() > 1.0) {
        return Err(DccaError::EstimateOutOfBounds {
            value: bad,
            context: format!("estimator={} d={} rho={} T={}", estimator, cell.d, cell.rho, cell.t),
        });
    }
    let summary = aggregate(&samples)?;
    rows.push(AggregateRow {
        estimator,
        d: cell.d,
        rho_true: cell.rho,
        t: cell.t,
        s,
        q025: summary.q025,
        median: summary.median,
        q975: summary.q975,
        sd: summary.sd,
        reps: samples.len(),
    });
    Ok(())
}
