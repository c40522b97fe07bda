//! Plain CSV with `#` metadata lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Significant digits of every real column.
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Magnitudes below this are written in scientific notation.
const SCI_BELOW: f64 = 1e-4;
/// Magnitudes at or above this are written in scientific notation.
const SCI_ABOVE: f64 = 1e12;

/// Fixed 12-significant-digit rendering; scientific for `|x| < 1e-4`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if !(SCI_BELOW..SCI_ABOVE).contains(&a) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    let int_digits = a.log10().floor() as i64 + 1;
    let decimals = (SIGNIFICANT_DIGITS as i64 - int_digits).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit, e.g. 9.99…96 -> 10.0…0.
    let carried = s.parse::<f64>().map_or(false, |v| v.abs() >= 10f64.powi(int_digits as i32));
    if carried && decimals > 0 {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}

pub fn format_opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) {
        self.comments.push(format!("{key} = {value}"));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Table::default();
        for line in text.lines() {
            if let Some(c) = line.strip_prefix('#') {
                t.comments.push(c.trim().to_string());
            } else if line.is_empty() {
                continue;
            } else if t.header.is_empty() {
                t.header = line.split(',').map(str::to_string).collect();
            } else {
                let row: Vec<String> = line.split(',').map(str::to_string).collect();
                if row.len() != t.header.len() {
                    return Err(Error::Validation(format!("row has {} fields, header has {}", row.len(), t.header.len())));
                }
                t.rows.push(row);
            }
        }
        if t.header.is_empty() {
            return Err(Error::Validation("missing CSV header".into()));
        }
        Ok(t)
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Validation(format!("no column named {name}")))
    }

    /// Value of a metadata line `key = value`.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(format_number(1.5e-5), "1.50000000000e-5");
        assert_eq!(format_number(-2.0), "-2.00000000000");
        assert_eq!(format_number(40.0), "40.0000000000");
        assert_eq!(format_number(1e-4), "0.000100000000000");
        assert_eq!(format_number(3e15), "3.00000000000e15");
    }

    #[test]
    fn round_trip_values() {
        for x in [0.123456789012345, -7.5e-30, 1e-4, 0.9999999999999, 123.456, 9.9999999999996] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11, "{x} -> {}", format_number(x));
        }
    }

    #[test]
    fn parse_round_trip() {
        let mut t = Table::new(&["r", "D"]);
        t.comment("model", "tfim(h=2)");
        t.push(vec!["5".into(), format_number(0.25)]);
        let back = Table::parse(&t.to_csv()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.meta("model"), Some("tfim(h=2)"));
        assert!(Table::parse("a,b\n1\n").is_err());
    }
}
