//! Stable text formats for fields and manifests.
//!
//! Fields are written as CSV with a header row `x,u_1,...,u_n` (or `x,v`
//! for scalar fields) and every float in `{:.16e}` form, i.e. 17
//! significant digits, so values round-trip exactly. JSON is emitted from
//! `serde_json::Value`, whose maps are ordered by key.

use std::path::Path;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::GridField;

/// Formats a float with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn field_csv(field: &GridField) -> String {
    let mut out = String::from("x");
    if field.ncomp == 1 {
        out.push_str(",u_1");
    } else {
        for i in 1..=field.ncomp {
            out.push_str(&format!(",u_{i}"));
        }
    }
    out.push('\n');
    for j in 0..field.len() {
        out.push_str(&fmt_float(field.x(j)));
        for v in field.at(j) {
            out.push(',');
            out.push_str(&fmt_float(*v));
        }
        out.push('\n');
    }
    out
}

/// Parses a field CSV written by [`field_csv`]. The time stamp is not part
/// of the format and is set to `t`.
pub fn parse_field_csv(src: &str, t: f64) -> Result<GridField> {
    let mut lines = src.lines();
    let header = lines
        .next()
        .ok_or_else(|| LabError::Config("empty field file".into()))?;
    let ncomp = header.split(',').count().saturating_sub(1);
    if ncomp == 0 {
        return Err(LabError::Config("field header has no components".into()));
    }
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| LabError::Parse {
                message: e.to_string(),
                line: k + 2,
                column: 1,
            })?;
        if cells.len() != ncomp + 1 {
            return Err(LabError::Parse {
                message: format!("expected {} columns", ncomp + 1),
                line: k + 2,
                column: 1,
            });
        }
        xs.push(cells[0]);
        values.extend_from_slice(&cells[1..]);
    }
    if xs.len() < 2 {
        return Err(LabError::Config("field needs at least two points".into()));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    GridField::new(xs[0], dx, t, ncomp, values)
}

pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(-2.0), "-2.0000000000000000e0");
        let x = std::f64::consts::PI;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_round_trip() {
        let f = GridField::new(-1.0, 0.25, 0.5, 2, (0..18).map(|k| k as f64 / 7.0).collect()).unwrap();
        let text = field_csv(&f);
        assert!(text.starts_with("x,u_1,u_2\n"));
        let g = parse_field_csv(&text, 0.5).unwrap();
        assert_eq!(g.values, f.values);
        assert_eq!(g.len(), f.len());
    }
}
