//! Row-oriented output in three formats: aligned text table, CSV, and
//! json-lines. All numeric formatting is deterministic; identical inputs
//! produce byte-identical output.

use std::fmt::Write as _;

/// One table cell.
#[derive(Clone, Debug)]
pub enum Cell {
    U(u64),
    F(f64),
    S(String),
    B(bool),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

/// Floats print with 10 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.9e}", x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => fmt_float(*v),
            Cell::S(v) => v.clone(),
            Cell::B(v) => v.to_string(),
        }
    }

    fn render_json(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => {
                if v.is_finite() {
                    serde_json::to_string(v).expect("finite f64 serializes")
                } else {
                    // JSON has no non-finite literals; emit them as strings.
                    format!("\"{}\"", fmt_float(*v))
                }
            }
            Cell::S(v) => serde_json::to_string(v).expect("string serializes"),
            Cell::B(v) => v.to_string(),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::U(_) | Cell::F(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned, human-readable columns.
    Table,
    /// Comma-separated values with a header row.
    Csv,
    /// One JSON object per row.
    JsonLines,
}

/// A uniform rectangular result set.
pub struct Rows {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Rows {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Rows {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Renders to a string (no trailing newline decisions left to callers;
    /// every line ends with `\n`).
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::JsonLines => self.render_json_lines(),
        }
    }

    fn render_table(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row.iter()) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let mut line = String::new();
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{:<width$}", col, width = widths[i]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for (i, w) in widths.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&"-".repeat(*w));
        }
        out.push('\n');
        for (row, rendered_row) in self.rows.iter().zip(rendered.iter()) {
            line.clear();
            for (i, cell) in rendered_row.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                if row[i].is_numeric() {
                    let _ = write!(line, "{:>width$}", cell, width = widths[i]);
                } else {
                    let _ = write!(line, "{:<width$}", cell, width = widths[i]);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| {
                    let s = c.render();
                    if s.contains(',') || s.contains('"') || s.contains('\n') {
                        format!("\"{}\"", s.replace('"', "\"\""))
                    } else {
                        s
                    }
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            for (i, (col, cell)) in self.columns.iter().zip(row.iter()).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\"{}\":{}", col, cell.render_json());
            }
            out.push_str("}\n");
        }
        out
    }
}

/// Prints the run header: a timestamp line plus an options echo, each
/// prefixed with `#`. Suppressed entirely by `--no-header`.
pub fn print_header(command: &str, options: &[(&str, String)], no_header: bool) {
    if no_header {
        return;
    }
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    println!("# chball {command} ts={ts}");
    let echo: Vec<String> = options.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("# options: {}", echo.join(" "));
}
