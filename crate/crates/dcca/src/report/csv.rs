//! The aggregate CSV schema: one row per cell × estimator × scale.
//!
//! Exact format: header below, comma-separated fields in header order,
//! decimal point `.`, reals with 6 significant digits, `s` left empty for
//! Pearson rows, LF line endings, UTF-8 throughout.

use std::io::Write;

use super::format_significant;
use crate::error::{DccaError, Result};
use crate::mc::{AggregateRow, Estimator};

/// Header line of the aggregate schema (without the trailing newline).
pub const CSV_HEADER: &str = "estimator,d,rho_true,T,s,q025,median,q975,sd,reps";

const SIGNIFICANT_DIGITS: i32 = 6;

/// Writes rows in the aggregate schema and returns the number of bytes
/// written. Errors on an empty row list.
pub fn write_csv<W: Write>(rows: &[AggregateRow], dest: &mut W) -> Result<u64> {
    if rows.is_empty() {
        return Err(DccaError::EmptyInput("no aggregate rows to write"));
    }
    let mut bytes = 0u64;
    let mut emit = |line: String, dest: &mut W| -> Result<()> {
        dest.write_all(line.as_bytes())?;
        dest.write_all(b"\n")?;
        bytes += line.len() as u64 + 1;
        Ok(())
    };
    emit(CSV_HEADER.to_string(), dest)?;
    for row in rows {
        let sig = |v: f64| format_significant(v, SIGNIFICANT_DIGITS);
        let s = row.s.map(|s| s.to_string()).unwrap_or_default();
        emit(
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                row.estimator.id(),
                sig(row.d),
                sig(row.rho_true),
                row.t,
                s,
                sig(row.q025),
                sig(row.median),
                sig(row.q975),
                sig(row.sd),
                row.reps
            ),
            dest,
        )?;
    }
    dest.flush()?;
    Ok(bytes)
}

/// Parses text in the aggregate schema back into rows.
///
/// Errors carry the 1-based line number of the first offending line.
pub fn read_csv(text: &str) -> Result<Vec<AggregateRow>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DccaError::CsvSchema {
        line: 1,
        message: "empty input, expected header".into(),
    })?;
    if header != CSV_HEADER {
        return Err(DccaError::CsvSchema {
            line: 1,
            message: format!("bad header {header:?}, expected {CSV_HEADER:?}"),
        });
    }

    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 10 {
            return Err(DccaError::CsvSchema {
                line,
                message: format!("expected 10 fields, found {}", fields.len()),
            });
        }
        let schema_err = |message: String| DccaError::CsvSchema { line, message };
        let real = |field: &str, name: &str| -> Result<f64> {
            let v: f64 = field
                .parse()
                .map_err(|_| schema_err(format!("cannot parse {name} value {field:?}")))?;
            if !v.is_finite() {
                return Err(schema_err(format!("non-finite {name} value {field:?}")));
            }
            Ok(v)
        };
        let integer = |field: &str, name: &str| -> Result<usize> {
            field
                .parse()
                .map_err(|_| schema_err(format!("cannot parse {name} value {field:?}")))
        };

        let estimator: Estimator = fields[0]
            .parse()
            .map_err(|_| schema_err(format!("unknown estimator {:?}", fields[0])))?;
        let s = if fields[4].is_empty() { None } else { Some(integer(fields[4], "s")?) };
        rows.push(AggregateRow {
            estimator,
            d: real(fields[1], "d")?,
            rho_true: real(fields[2], "rho_true")?,
            t: integer(fields[3], "T")?,
            s,
            q025: real(fields[5], "q025")?,
            median: real(fields[6], "median")?,
            q975: real(fields[7], "q975")?,
            sd: real(fields[8], "sd")?,
            reps: integer(fields[9], "reps")?,
        });
    }
    Ok(rows)
}
