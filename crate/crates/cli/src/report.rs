use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{Map, Value};

/// The result of one command: header inputs, a table, and named values.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Columns written to CSV, in order; empty means all.
    pub csv_columns: Vec<&'static str>,
    /// Keep the table out of the text output (it still goes to JSON/CSV).
    pub hide_rows: bool,
    pub exact: Vec<(String, String)>,
    pub approx: Vec<(String, String)>,
    /// A failed internal consistency check; the run exits nonzero.
    pub trap: Option<String>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    command: &'a str,
    inputs: Map<String, Value>,
    rows: Vec<Map<String, Value>>,
    exact: Map<String, Value>,
    approx: Map<String, Value>,
    runtime_ms: u128,
}

fn to_map(pairs: &[(String, String)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect()
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.push((key.to_string(), value.to_string()));
    }

    pub fn exact(&mut self, key: &str, value: impl ToString) {
        self.exact.push((key.to_string(), value.to_string()));
    }

    pub fn approx(&mut self, key: &str, value: impl ToString) {
        self.approx.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.trap.is_none() {
            self.trap = Some(what());
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.inputs {
            writeln!(out, "# {}: {}", k, v)?;
        }
        if !self.hide_rows && !self.columns.is_empty() {
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|j| {
                    self.rows
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain([self.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| -> String {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{:<w$}", c, w = *w))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(self.columns.clone()))?;
            for r in &self.rows {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
        }
        for (k, v) in &self.exact {
            writeln!(out, "{}: {}", k, v)?;
        }
        for (k, v) in &self.approx {
            writeln!(out, "{} (approx): {}", k, v)?;
        }
        Ok(())
    }

    pub fn write_json(&self, path: &Path, runtime_ms: u128) -> io::Result<()> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                    .collect()
            })
            .collect();
        let report = JsonReport {
            command: self.command,
            inputs: to_map(&self.inputs),
            rows,
            exact: to_map(&self.exact),
            approx: to_map(&self.approx),
            runtime_ms,
        };
        let mut f = File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &report)?;
        writeln!(f)
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let picked: Vec<usize> = if self.csv_columns.is_empty() {
            (0..self.columns.len()).collect()
        } else {
            self.csv_columns
                .iter()
                .map(|c| {
                    self.columns
                        .iter()
                        .position(|x| x == c)
                        .expect("csv column is a table column")
                })
                .collect()
        };
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(picked.iter().map(|&j| self.columns[j]))?;
        for r in &self.rows {
            w.write_record(picked.iter().map(|&j| r[j].as_str()))?;
        }
        w.flush()
    }
}

/// `n/d` even for integers, so exact CSV cells have one shape.
pub fn fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn bigint_list(items: &[BigInt]) -> String {
    format!("({})", join(items, ", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_table() {
        let mut r = Report::new("demo");
        r.input("p", 2);
        r.columns = vec!["e", "length"];
        r.row(vec!["0".into(), "1".into()]);
        r.row(vec!["10".into(), "680".into()]);
        r.exact("value", "4/3");
        r.approx("value", "1.33");
        let mut buf = Vec::new();
        r.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# command: demo\n# p: 2\ne   length\n0   1\n10  680\nvalue: 4/3\nvalue (approx): 1.33\n");
    }

    #[test]
    fn fractions() {
        let r = BigRational::new(8.into(), 6.into());
        assert_eq!(fraction(&r), "4/3");
        assert_eq!(fraction(&BigRational::from_integer(2.into())), "2/1");
    }
}
