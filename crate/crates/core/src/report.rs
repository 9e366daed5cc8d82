//! Named scalar diagnostics with explicit pass/fail thresholds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::io::fmt_float;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// value <= threshold
    Le,
    /// value >= threshold
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        let pass = match relation {
            Relation::Le => value <= threshold,
            Relation::Ge => value >= threshold,
        };
        Check {
            name: name.into(),
            value,
            relation,
            threshold,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub model: String,
    pub exponent: f64,
    pub constant: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Series {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Result of one experiment. `pass` is derived from `checks` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub name: String,
    pub scalars: BTreeMap<String, f64>,
    pub series: Option<Series>,
    pub fit: Option<Fit>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl EstimateReport {
    pub fn new(name: impl Into<String>) -> Self {
        EstimateReport {
            schema_version: REPORT_SCHEMA_VERSION,
            name: name.into(),
            scalars: BTreeMap::new(),
            series: None,
            fit: None,
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn scalar(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.scalars.insert(key.into(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).copied()
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> bool {
        let c = Check::new(name, value, relation, threshold);
        let pass = c.pass;
        self.checks.push(c);
        self.pass = self.checks.iter().all(|c| c.pass);
        pass
    }

    /// Asserts `lo <= value <= hi` as two recorded checks.
    pub fn check_within(&mut self, name: &str, value: f64, lo: f64, hi: f64) -> bool {
        let a = self.check(format!("{name}_min"), value, Relation::Ge, lo);
        let b = self.check(format!("{name}_max"), value, Relation::Le, hi);
        a && b
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Pretty JSON with lexicographically sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

impl fmt::Display for EstimateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.name, if self.pass { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Ge => ">=",
            };
            writeln!(
                f,
                "  {:<4} {:<40} {:>14.6e} {} {:.6e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                rel,
                c.threshold
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_checks() {
        let mut r = EstimateReport::new("t");
        assert!(r.pass);
        r.check("a", 1.0, Relation::Le, 2.0);
        assert!(r.pass);
        r.check("b", 1.0, Relation::Ge, 2.0);
        assert!(!r.pass);
        assert!(!r.check("nan", f64::NAN, Relation::Le, 1.0));
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut r = EstimateReport::new("t");
        r.scalar("zeta", 1.0).scalar("alpha", 2.0);
        let s = r.to_json();
        let a = s.find("\"alpha\"").unwrap();
        let z = s.find("\"zeta\"").unwrap();
        assert!(a < z);
        assert!(s.find("\"checks\"").unwrap() < s.find("\"name\"").unwrap());
    }
}
