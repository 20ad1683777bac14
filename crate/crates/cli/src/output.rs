//! CSV tables with platform-independent number formatting.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{CliError, Result};

pub const SIGNIFICANT_DIGITS: usize = 10;

/// Fixed-point with ten significant digits. Magnitudes outside
/// `[1e-6, 1e15)` switch to scientific notation so tails stay readable.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if !(-6..15).contains(&exp) {
        return sci;
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_values(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|&v| format_value(v)).collect());
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Writes to `out`, or to stdout when `out` is `None`.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let text = self.to_csv();
        match out {
            Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
            None => io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(format_value(4.5), "4.500000000");
        assert_eq!(format_value(0.0123456789012), "0.01234567890");
        assert_eq!(format_value(-1234.56789012), "-1234.567890");
        assert_eq!(format_value(12345678901.5), "12345678902");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(-0.0), "0");
        assert_eq!(format_value(1.0e-3), "0.001000000000");
    }

    #[test]
    fn tails_use_exponent() {
        assert_eq!(format_value(1.5e-9), "1.500000000e-9");
        assert_eq!(format_value(2.0e20), "2.000000000e20");
        assert_eq!(format_value(f64::NAN), "NaN");
    }

    #[test]
    fn rounding_carries_into_next_decade() {
        assert_eq!(format_value(9.9999999999), "10.00000000");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["t_yr", "pod_pct"]);
        t.push_values(&[1.0, 4.5]);
        assert_eq!(t.to_csv(), "t_yr,pod_pct\n1.000000000,4.500000000\n");
    }
}
