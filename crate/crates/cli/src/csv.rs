//! Plot-ready CSV tables with `#` comment headers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Nine significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Debug, Clone)]
pub struct Table {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn comments<'a>(&mut self, lines: impl IntoIterator<Item = &'a String>) -> &mut Self {
        self.comments.extend(lines.into_iter().cloned());
        self
    }

    /// Appends a row of preformatted cells.
    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        self.rows.push(cells);
        self
    }

    pub fn values(&mut self, values: &[f64]) -> &mut Self {
        self.row(values.iter().map(|&v| num(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    pub fn write(&self, dir: &Path, name: &str) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_header_and_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.comment("run x").values(&[1.0, -0.0890895]);
        assert_eq!(t.render(), "# run x\na,b\n1.00000000e0,-8.90895000e-2\n");
    }
}
