//! Fixed-schema CSV serialization of aggregate rows and static SVG charts
//! of the Monte Carlo results.

mod csv;
mod svg;

pub use csv::{read_csv, write_csv, CSV_HEADER};
pub use svg::{render_charts, ChartKind, ChartSpec, RenderOutput, Series};

/// Formats a real with the given number of significant digits, plain
/// decimal notation. This is the number format of the aggregate CSV schema.
pub(crate) fn format_significant(v: f64, digits: i32) -> String {
    if v == 0.0 {
        // sign-free zero, one digit before the decimal point
        return format!("{:.*}", digits.max(1) as usize - 1, 0.0);
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}
