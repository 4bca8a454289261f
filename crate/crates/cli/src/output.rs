//! Rendering of command results as aligned text, CSV or JSON.

use auction_cube::format::{fmt_sig, round_sig};
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// Significant digits per format, unless full precision is requested.
pub fn digits(format: Format, full_precision: bool) -> usize {
    match (full_precision, format) {
        (true, _) => 17,
        (false, Format::Table) => 6,
        (false, _) => 10,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    List(Vec<String>),
    Missing,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self, digits: usize) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(items) => items.join("; "),
            Cell::Missing => "n.a.".into(),
        }
    }

    fn json(&self, digits: usize) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(round_sig(*x, digits))
                .map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::List(items) => Value::from(items.clone()),
            Cell::Missing => Value::Null,
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Num(_) | Cell::Int(_))
    }
}

/// Either a table of rows or a single record of named fields.
#[derive(Debug)]
pub enum Report {
    Rows {
        headers: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
    },
    Record(Vec<(&'static str, Cell)>),
}

impl Report {
    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Table => self.text(digits),
            Format::Csv => self.csv(digits),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json(digits)).expect("json renders");
                s.push('\n');
                s
            }
        }
    }

    fn as_grid(&self, digits: usize) -> (Vec<String>, Vec<Vec<String>>, Vec<bool>) {
        match self {
            Report::Rows { headers, rows } => {
                let right = (0..headers.len())
                    .map(|c| {
                        rows.iter()
                            .all(|r| r[c].is_numeric() || r[c] == Cell::Missing)
                    })
                    .collect();
                (
                    headers.iter().map(|h| h.to_string()).collect(),
                    rows.iter()
                        .map(|r| r.iter().map(|c| c.render(digits)).collect())
                        .collect(),
                    right,
                )
            }
            Report::Record(fields) => (
                vec!["field".into(), "value".into()],
                fields
                    .iter()
                    .map(|(k, v)| vec![k.to_string(), v.render(digits)])
                    .collect(),
                vec![false, false],
            ),
        }
    }

    fn text(&self, digits: usize) -> String {
        let (headers, rows, right) = self.as_grid(digits);
        let widths: Vec<usize> = (0..headers.len())
            .map(|c| {
                rows.iter()
                    .map(|r| r[c].chars().count())
                    .chain([headers[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .zip(&right)
                .map(|((s, &w), &r)| {
                    if r {
                        format!("{s:>w$}")
                    } else {
                        format!("{s:<w$}")
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out += &line(&rule);
        for r in &rows {
            out += &line(r);
        }
        out
    }

    fn csv(&self, digits: usize) -> String {
        let (headers, rows, _) = self.as_grid(digits);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&headers).expect("in-memory write");
        for r in &rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    fn json(&self, digits: usize) -> Value {
        let object = |pairs: &mut dyn Iterator<Item = (&str, &Cell)>| {
            Value::Object(
                pairs
                    .map(|(k, v)| (k.to_string(), v.json(digits)))
                    .collect::<Map<_, _>>(),
            )
        };
        match self {
            Report::Rows { headers, rows } => Value::Array(
                rows.iter()
                    .map(|r| object(&mut headers.iter().copied().zip(r.iter())))
                    .collect(),
            ),
            Report::Record(fields) => object(&mut fields.iter().map(|(k, v)| (*k, v))),
        }
    }
}
