//! Static SVG charts of aggregate rows.
//!
//! Per series length `T`, DCCA rows produce one median-with-band chart and
//! one sd chart per `d` (series = scales, darkest shade = smallest `s`);
//! Pearson rows produce one of each per `T` (series = `d` values, darkest
//! shade = largest `d`). Median charts carry the true-value reference
//! diagonal in red and dashed 95% band lines. Output is deterministic:
//! identical rows yield byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{DccaError, Result};
use crate::mc::{AggregateRow, Estimator};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 38.0;
const MARGIN_BOTTOM: f64 = 46.0;
const REFERENCE_COLOR: &str = "#cc0000";
const DARKEST_GRAY: u8 = 32;
const LIGHTEST_GRAY: u8 = 200;

/// What a single chart shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// Solid median line per series plus dashed 2.5%/97.5% band lines and
    /// the true-value diagonal.
    MedianWithBand,
    /// One solid standard-deviation curve per series.
    SdCurve,
}

/// One polyline family of a chart. `points` runs parallel to
/// [`ChartSpec::xs`]; `None` marks a gap (missing cell).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub gray: u8,
    pub points: Vec<Option<BandPoint>>,
}

/// Values of one series at one x position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub mid: f64,
    pub lower: f64,
    pub upper: f64,
}

/// A fully resolved chart: data, axes and reference line.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Shared x grid (the rho_true values of the facet), ascending.
    pub xs: Vec<f64>,
    pub series: Vec<Series>,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Draw the y = x true-value diagonal.
    pub reference_diagonal: bool,
}

/// Files written by [`render_charts`] plus incomplete-facet warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Renders every facet found in `rows` into `out_dir` (created if absent).
///
/// Facets with missing grid points are still rendered, with gaps, and
/// reported in [`RenderOutput::warnings`]. Errors if `rows` is empty.
pub fn render_charts(rows: &[AggregateRow], out_dir: &Path) -> Result<RenderOutput> {
    if rows.is_empty() {
        return Err(DccaError::EmptyInput("no aggregate rows to render"));
    }
    fs::create_dir_all(out_dir)?;

    let mut files = Vec::new();
    let mut warnings = Vec::new();

    let dcca: Vec<&AggregateRow> = rows.iter().filter(|r| r.estimator == Estimator::Dcca).collect();
    let pearson: Vec<&AggregateRow> =
        rows.iter().filter(|r| r.estimator == Estimator::Pearson).collect();

    for &t in &sorted_ts(&dcca) {
        for &d in &sorted_by_total_cmp(dcca.iter().map(|r| r.d)) {
            let facet: Vec<&AggregateRow> =
                dcca.iter().filter(|r| r.t == t && r.d == d).copied().collect();
            for (kind, stem) in [(ChartKind::MedianWithBand, "median"), (ChartKind::SdCurve, "sd")] {
                let spec = dcca_facet_chart(&facet, d, t, kind, &mut warnings);
                let path = out_dir.join(format!("dcca_{stem}_T{t}_d{d}.svg"));
                fs::write(&path, render_svg(&spec))?;
                files.push(path);
            }
        }
    }

    for &t in &sorted_ts(&pearson) {
        let facet: Vec<&AggregateRow> = pearson.iter().filter(|r| r.t == t).copied().collect();
        for (kind, stem) in [(ChartKind::MedianWithBand, "median"), (ChartKind::SdCurve, "sd")] {
            let spec = pearson_facet_chart(&facet, t, kind, &mut warnings);
            let path = out_dir.join(format!("pearson_{stem}_T{t}.svg"));
            fs::write(&path, render_svg(&spec))?;
            files.push(path);
        }
    }

    Ok(RenderOutput { files, warnings })
}

fn sorted_ts(rows: &[&AggregateRow]) -> Vec<usize> {
    let mut ts: Vec<usize> = rows.iter().map(|r| r.t).collect();
    ts.sort_unstable();
    ts.dedup();
    ts
}

fn sorted_by_total_cmp(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = values.collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

// Grayscale ramp over `count` series; index 0 gets `from`.
fn gray_ramp(index: usize, count: usize, from: u8, to: u8) -> u8 {
    if count <= 1 {
        return from;
    }
    let t = index as f64 / (count - 1) as f64;
    (from as f64 + t * (to as f64 - from as f64)).round() as u8
}

fn dcca_facet_chart(
    facet: &[&AggregateRow],
    d: f64,
    t: usize,
    kind: ChartKind,
    warnings: &mut Vec<String>,
) -> ChartSpec {
    let xs = sorted_by_total_cmp(facet.iter().map(|r| r.rho_true));
    let scales: Vec<usize> = {
        let mut s: Vec<usize> = facet.iter().filter_map(|r| r.s).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let series = scales
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let points = band_points(&xs, kind, |x| {
                facet.iter().find(|r| r.s == Some(s) && r.rho_true == x).copied()
            });
            let missing = points.iter().filter(|p| p.is_none()).count();
            if missing > 0 {
                warnings.push(format!(
                    "incomplete facet dcca d={d} T={t}: series s={s} missing {missing} of {} rho points",
                    xs.len()
                ));
            }
            Series {
                label: format!("s={s}"),
                // darkest shade = smallest scale
                gray: gray_ramp(i, scales.len(), DARKEST_GRAY, LIGHTEST_GRAY),
                points,
            }
        })
        .collect();

    finish_chart(
        ChartSpec {
            kind,
            title: match kind {
                ChartKind::MedianWithBand => {
                    format!("DCCA coefficient, median and 95% band (d={d}, T={t})")
                }
                ChartKind::SdCurve => format!("DCCA coefficient, standard deviation (d={d}, T={t})"),
            },
            x_label: "true innovation correlation".into(),
            y_label: match kind {
                ChartKind::MedianWithBand => "estimated coefficient".into(),
                ChartKind::SdCurve => "standard deviation".into(),
            },
            xs,
            series,
            x_range: (0.0, 0.0),
            y_range: (0.0, 0.0),
            reference_diagonal: kind == ChartKind::MedianWithBand,
        },
    )
}

fn pearson_facet_chart(
    facet: &[&AggregateRow],
    t: usize,
    kind: ChartKind,
    warnings: &mut Vec<String>,
) -> ChartSpec {
    let xs = sorted_by_total_cmp(facet.iter().map(|r| r.rho_true));
    let ds = sorted_by_total_cmp(facet.iter().map(|r| r.d));
    let series = ds
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let points = band_points(&xs, kind, |x| {
                facet.iter().find(|r| r.d == d && r.rho_true == x).copied()
            });
            let missing = points.iter().filter(|p| p.is_none()).count();
            if missing > 0 {
                warnings.push(format!(
                    "incomplete facet pearson T={t}: series d={d} missing {missing} of {} rho points",
                    xs.len()
                ));
            }
            Series {
                label: format!("d={d}"),
                // darkest shade = strongest non-stationarity
                gray: gray_ramp(i, ds.len(), LIGHTEST_GRAY, DARKEST_GRAY),
                points,
            }
        })
        .collect();

    finish_chart(ChartSpec {
        kind,
        title: match kind {
            ChartKind::MedianWithBand => {
                format!("Pearson correlation, median and 95% band (T={t})")
            }
            ChartKind::SdCurve => format!("Pearson correlation, standard deviation (T={t})"),
        },
        x_label: "true innovation correlation".into(),
        y_label: match kind {
            ChartKind::MedianWithBand => "estimated coefficient".into(),
            ChartKind::SdCurve => "standard deviation".into(),
        },
        xs,
        series,
        x_range: (0.0, 0.0),
        y_range: (0.0, 0.0),
        reference_diagonal: kind == ChartKind::MedianWithBand,
    })
}

fn band_points<'a>(
    xs: &[f64],
    kind: ChartKind,
    lookup: impl Fn(f64) -> Option<&'a AggregateRow>,
) -> Vec<Option<BandPoint>> {
    xs.iter()
        .map(|&x| {
            lookup(x).map(|row| match kind {
                ChartKind::MedianWithBand => {
                    BandPoint { mid: row.median, lower: row.q025, upper: row.q975 }
                }
                ChartKind::SdCurve => BandPoint { mid: row.sd, lower: row.sd, upper: row.sd },
            })
        })
        .collect()
}

// Computes axis ranges from the data (and the reference diagonal, which
// must stay inside the chart) with 5% padding.
fn finish_chart(mut spec: ChartSpec) -> ChartSpec {
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &spec.xs {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
    }
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for series in &spec.series {
        for point in series.points.iter().flatten() {
            y_lo = y_lo.min(point.lower).min(point.mid);
            y_hi = y_hi.max(point.upper).max(point.mid);
        }
    }
    if spec.reference_diagonal {
        y_lo = y_lo.min(x_lo);
        y_hi = y_hi.max(x_hi);
    }
    if !x_lo.is_finite() || x_lo == x_hi {
        (x_lo, x_hi) = (x_lo.min(0.0) - 0.5, x_hi.max(0.0) + 0.5);
    }
    if !y_lo.is_finite() || y_lo == y_hi {
        (y_lo, y_hi) = (y_lo.min(0.0) - 0.5, y_hi.max(0.0) + 0.5);
    }
    let x_pad = 0.05 * (x_hi - x_lo);
    let y_pad = 0.05 * (y_hi - y_lo);
    spec.x_range = (x_lo - x_pad, x_hi + x_pad);
    spec.y_range = (y_lo - y_pad, y_hi + y_pad);
    spec
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

fn px(v: f64) -> String {
    format!("{v:.2}")
}

struct Frame {
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN_LEFT + (v - lo) / (hi - lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - MARGIN_BOTTOM - (v - lo) / (hi - lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

// Ticks at multiples of a 1/2/5 step covering about five divisions.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm <= 1.0 {
        mag
    } else if norm <= 2.0 {
        2.0 * mag
    } else if norm <= 5.0 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let mut out = Vec::new();
    let mut k = (lo / step).ceil() as i64;
    while (k as f64) * step <= hi + 1e-12 * span {
        out.push(k as f64 * step);
        k += 1;
    }
    (out, decimals)
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline_segments(points: &[(f64, Option<f64>)], frame: &Frame) -> Vec<String> {
    let mut segments = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for &(x, y) in points {
        match y {
            Some(y) => current.push(format!("{},{}", px(frame.x(x)), px(frame.y(y)))),
            None => {
                if current.len() > 1 {
                    segments.push(current.join(" "));
                }
                current.clear();
            }
        }
    }
    if current.len() > 1 {
        segments.push(current.join(" "));
    }
    segments
}

/// Renders one chart as a standalone SVG 1.1 document.
pub fn render_svg(spec: &ChartSpec) -> String {
    let frame = Frame { x_range: spec.x_range, y_range: spec.y_range };
    let plot_left = MARGIN_LEFT;
    let plot_right = WIDTH - MARGIN_RIGHT;
    let plot_top = MARGIN_TOP;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        px(WIDTH / 2.0),
        escape_xml(&spec.title)
    ));

    // axes and ticks
    let (x_ticks, x_dec) = ticks(spec.x_range.0, spec.x_range.1);
    let (y_ticks, y_dec) = ticks(spec.y_range.0, spec.y_range.1);
    for x in &x_ticks {
        let sx = px(frame.x(*x));
        out.push_str(&format!(
            "<line x1=\"{sx}\" y1=\"{}\" x2=\"{sx}\" y2=\"{}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            px(plot_top),
            px(plot_bottom)
        ));
        out.push_str(&format!(
            "<text x=\"{sx}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.*}</text>\n",
            px(plot_bottom + 16.0),
            x_dec,
            x
        ));
    }
    for y in &y_ticks {
        let sy = px(frame.y(*y));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{sy}\" x2=\"{}\" y2=\"{sy}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            px(plot_left),
            px(plot_right)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.*}</text>\n",
            px(plot_left - 6.0),
            px(frame.y(*y) + 4.0),
            y_dec,
            y
        ));
    }
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        px(plot_left),
        px(plot_top),
        px(plot_right - plot_left),
        px(plot_bottom - plot_top)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        px((plot_left + plot_right) / 2.0),
        px(HEIGHT - 10.0),
        escape_xml(&spec.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        px((plot_top + plot_bottom) / 2.0),
        px((plot_top + plot_bottom) / 2.0),
        escape_xml(&spec.y_label)
    ));

    // true-value reference, clipped to the plot area
    if spec.reference_diagonal {
        let lo = spec.x_range.0.max(spec.y_range.0);
        let hi = spec.x_range.1.min(spec.y_range.1);
        if lo < hi {
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{REFERENCE_COLOR}\" stroke-width=\"1.5\"/>\n",
                px(frame.x(lo)),
                px(frame.y(lo)),
                px(frame.x(hi)),
                px(frame.y(hi))
            ));
        }
    }

    for series in &spec.series {
        let color = format!("rgb({0},{0},{0})", series.gray);
        if spec.kind == ChartKind::MedianWithBand {
            for extract in [|p: &BandPoint| p.lower, |p: &BandPoint| p.upper] {
                let pts: Vec<(f64, Option<f64>)> = spec
                    .xs
                    .iter()
                    .zip(&series.points)
                    .map(|(&x, p)| (x, p.as_ref().map(extract)))
                    .collect();
                for segment in polyline_segments(&pts, &frame) {
                    out.push_str(&format!(
                        "<polyline points=\"{segment}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" stroke-dasharray=\"5 3\"/>\n"
                    ));
                }
            }
        }
        let pts: Vec<(f64, Option<f64>)> = spec
            .xs
            .iter()
            .zip(&series.points)
            .map(|(&x, p)| (x, p.as_ref().map(|p| p.mid)))
            .collect();
        for segment in polyline_segments(&pts, &frame) {
            out.push_str(&format!(
                "<polyline points=\"{segment}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n"
            ));
        }
    }

    // legend, top-left inside the plot
    for (i, series) in spec.series.iter().enumerate() {
        let color = format!("rgb({0},{0},{0})", series.gray);
        let ly = plot_top + 14.0 + 15.0 * i as f64;
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            px(plot_left + 8.0),
            px(ly - 4.0),
            px(plot_left + 30.0),
            px(ly - 4.0)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            px(plot_left + 35.0),
            px(ly),
            escape_xml(&series.label)
        ));
    }

    out.push_str("</svg>\n");
    out
}
