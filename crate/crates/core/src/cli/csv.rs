//! Rectangular numeric CSV tables with byte-stable formatting.

use std::fmt::Write as _;
use std::path::Path;

use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvDataset {
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl CsvDataset {
    /// Starts a table whose first column is `first`.
    pub fn new(first_name: &str, first: Vec<f64>) -> Self {
        Self { header: vec![first_name.to_string()], columns: vec![first] }
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<(), CliError> {
        if values.len() != self.rows() {
            return Err(CliError::Invariant(format!(
                "column has {} rows, table has {}",
                values.len(),
                self.rows()
            )));
        }
        self.header.push(name.into());
        self.columns.push(values);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }

    /// Header line plus one line per row, LF-terminated.
    pub fn render(&self) -> Result<String, CliError> {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in 0..self.rows() {
            for (c, column) in self.columns.iter().enumerate() {
                let v = column[r];
                if !v.is_finite() {
                    return Err(CliError::Invariant(format!("non-finite value in column `{}`", self.header[c])));
                }
                if c > 0 {
                    out.push(',');
                }
                write!(out, "{}", format_number(v)).expect("writing to a String");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = self.render()?;
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    let s = format!("{v:?}");
    if s == "-0.0" {
        "0.0".to_string()
    } else {
        s
    }
}
