//! Deterministic CSV and JSON rendering.

use std::fmt::Write as _;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits in scientific notation, independent of locale.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        // -0.0 + 0.0 == +0.0
        format!("{:.16e}", x + 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => fmt_num(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{name}\": ");
                match cell {
                    Cell::Num(x) if x.is_finite() => out.push_str(&fmt_num(*x)),
                    Cell::Num(_) => out.push_str("null"),
                    Cell::Int(v) => {
                        let _ = write!(out, "{v}");
                    }
                    Cell::Text(s) => {
                        out.push('"');
                        for ch in s.chars() {
                            match ch {
                                '"' => out.push_str("\\\""),
                                '\\' => out.push_str("\\\\"),
                                c if (c as u32) < 0x20 => {
                                    let _ = write!(out, "\\u{:04x}", c as u32);
                                }
                                c => out.push(c),
                            }
                        }
                        out.push('"');
                    }
                }
            }
            out.push('}');
        }
        if !self.rows.is_empty() {
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(-0.000123), "-1.2300000000000001e-4");
        assert_eq!(fmt_num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_num(f64::NAN), "NaN");
        assert_eq!(fmt_num(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::Num(0.5), Cell::Int(3), "x\"y".into()]);
        assert_eq!(t.to_csv(), "a,b,c\n5.0000000000000000e-1,3,x\"y\n");
        assert_eq!(
            t.to_json(),
            "[\n  {\"a\": 5.0000000000000000e-1, \"b\": 3, \"c\": \"x\\\"y\"}\n]\n"
        );
        assert_eq!(Table::new(&["a"]).to_json(), "[]\n");
    }
}
