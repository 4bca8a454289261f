//! Reference tables shipped under `tests/data`, kept in their original
//! German number format and parsed with the library's locale-tolerant reader.
#![allow(dead_code)]

use auction_cube::format::parse_number;

const FACTORS: &str = include_str!("../data/reference_g_h_factors.tsv");
const TABLE: &str = include_str!("../data/reference_order_stat_table.tsv");

/// A printed cell: its value and the size of one unit in its last printed digit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub last_digit: f64,
    pub text: &'static str,
}

fn cell(text: &'static str) -> Option<Cell> {
    if text == "n.a." {
        return None;
    }
    let value = parse_number(text).unwrap_or_else(|e| panic!("bad reference cell {text}: {e}"));
    let body = text.trim_end_matches('%');
    let decimals = body.split(',').nth(1).map_or(0, str::len) as i32;
    let scale = if text.ends_with('%') { 100.0 } else { 1.0 };
    Some(Cell {
        value,
        last_digit: 10f64.powi(-decimals) / scale,
        text,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct FactorRow {
    pub n: u32,
    pub g: Cell,
    pub h: Option<Cell>,
}

pub fn factor_rows() -> Vec<FactorRow> {
    FACTORS
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&'static str> = l.split('\t').collect();
            FactorRow {
                n: f[0].parse().unwrap(),
                g: cell(f[1]).unwrap(),
                h: cell(f[2]),
            }
        })
        .collect()
}

pub const TABLE_COLUMNS: [&str; 8] = [
    "G'",
    "E(X(1,n))",
    "E(X(2,n))",
    "E(X(3,n))",
    "G",
    "(G'-G)/G",
    "H",
    "(H'-H)/H",
];

#[derive(Debug, Clone)]
pub struct TableRow {
    pub sigma: f64,
    pub sigma_text: &'static str,
    pub n: u32,
    /// In the order of [`TABLE_COLUMNS`].
    pub cells: [Option<Cell>; 8],
}

pub fn table_rows() -> Vec<TableRow> {
    TABLE
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&'static str> = l.split('\t').collect();
            let mut cells = [None; 8];
            for (c, t) in cells.iter_mut().zip(&f[2..10]) {
                *c = cell(t);
            }
            TableRow {
                sigma: parse_number(f[0]).unwrap(),
                sigma_text: f[0],
                n: f[1].parse().unwrap(),
                cells,
            }
        })
        .collect()
}

/// One unit of the ninth significant digit of `x`.
pub fn ninth_digit_unit(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    10f64.powi(x.abs().log10().floor() as i32 - 8)
}
