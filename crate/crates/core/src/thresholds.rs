//! First- versus second-price thresholds.
//!
//! With sigma the spread of the bidders' indifference prices, a first-price
//! format is expected to be cheaper for the buyer exactly when the bidders'
//! strategic margin `M` stays below `G = E(X(2,n)) - E(X(1,n)) = sigma g(n)`.
//! The uniform approximation is `G' = 2 sqrt(3) sigma / (n + 1)`. The same
//! construction one rank higher gives `H = sigma h(n)` for Hongkong versus
//! English auctions with two winners, whose uniform counterpart `H'` equals `G'`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::orderstats::{validate_n, validate_sigma, OrderStatEngine, OrderStatSpec};

/// Default relative band around `G` inside which both formats count as equal.
pub const DEFAULT_BAND: f64 = 0.05;

/// The sigma grid of the reference tables: 0.1..0.9, 1..10, 20..100.
pub const REFERENCE_SIGMAS: [f64; 28] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0,
    20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0,
];

/// Significant digits of the published factor tables.
pub const TABLE_DIGITS: usize = 10;

fn standard_mean(rank: u32, n: u32) -> Result<f64> {
    OrderStatEngine::global().standard_mean(OrderStatSpec::new(rank, n)?)
}

/// Difference of two standard order-statistic means, each first rounded to
/// the table precision. This is how the published factors were produced,
/// so it matches them digit for digit where the unrounded difference can
/// be off by a few units in the tenth digit.
fn tabulated_gap(lower: u32, n: u32) -> Result<f64> {
    let a = round_sig(standard_mean(lower, n)?, TABLE_DIGITS);
    let b = round_sig(standard_mean(lower + 1, n)?, TABLE_DIGITS);
    Ok(b - a)
}

fn check_h(n: u32) -> Result<()> {
    validate_n(n)?;
    if n == 2 {
        return Err(Error::NotAvailable(n));
    }
    Ok(())
}

/// `g(n) = E(X(2,n)) - E(X(1,n))` at sigma 1, in the published convention.
pub fn g_factor(n: u32) -> Result<f64> {
    validate_n(n)?;
    tabulated_gap(1, n)
}

/// `h(n) = E(X(3,n)) - E(X(2,n))` at sigma 1, in the published convention.
/// Not available for `n = 2`.
pub fn h_factor(n: u32) -> Result<f64> {
    check_h(n)?;
    tabulated_gap(2, n)
}

/// `g(n)` at full double precision.
pub fn g_factor_exact(n: u32) -> Result<f64> {
    validate_n(n)?;
    Ok(standard_mean(2, n)? - standard_mean(1, n)?)
}

/// `h(n)` at full double precision.
pub fn h_factor_exact(n: u32) -> Result<f64> {
    check_h(n)?;
    Ok(standard_mean(3, n)? - standard_mean(2, n)?)
}

/// `G' = H' = 2 sqrt(3) sigma / (n + 1)`.
pub fn uniform_threshold(n: u32, sigma: f64) -> Result<f64> {
    validate_n(n)?;
    validate_sigma(sigma)?;
    Ok(2.0 * 3f64.sqrt() * sigma / f64::from(n + 1))
}

/// Thresholds for one `(n, sigma)` pair. `h`-related fields are `None` for `n = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub n: u32,
    pub sigma: f64,
    pub g_prime: f64,
    pub g: f64,
    pub h_prime: f64,
    pub h: Option<f64>,
    pub g_n: f64,
    pub h_n: Option<f64>,
    /// `(G' - G) / G`
    pub rel_err_g: f64,
    /// `(H' - H) / H`
    pub rel_err_h: Option<f64>,
}

pub fn threshold_report(n: u32, sigma: f64) -> Result<ThresholdReport> {
    let g_prime = uniform_threshold(n, sigma)?;
    let g_n = g_factor(n)?;
    let h_n = match h_factor(n) {
        Ok(v) => Some(v),
        Err(Error::NotAvailable(_)) => None,
        Err(e) => return Err(e),
    };
    let g = sigma * g_n;
    let h = h_n.map(|v| sigma * v);
    Ok(ThresholdReport {
        n,
        sigma,
        g_prime,
        g,
        h_prime: g_prime,
        h,
        g_n,
        h_n,
        rel_err_g: (g_prime - g) / g,
        rel_err_h: h.map(|h| (g_prime - h) / h),
    })
}

/// Which final price rule the buyer should prefer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Recommendation {
    FirstPrice,
    SecondPrice,
    Indifferent,
}

/// Compare the strategic margin `m` against `G = g(n) sigma`.
///
/// `FirstPrice` when `m < G (1 - band)`, `SecondPrice` when `m > G (1 + band)`,
/// otherwise `Indifferent`.
pub fn first_vs_second_price(m: f64, n: u32, sigma: f64, band: f64) -> Result<Recommendation> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "M",
            value: m,
            reason: "must be finite and >= 0",
        });
    }
    if !(band.is_finite() && (0.0..1.0).contains(&band)) {
        return Err(Error::InvalidParameter {
            name: "band",
            value: band,
            reason: "must lie in [0, 1)",
        });
    }
    validate_sigma(sigma)?;
    let g = g_factor(n)? * sigma;
    Ok(if m < g * (1.0 - band) {
        Recommendation::FirstPrice
    } else if m > g * (1.0 + band) {
        Recommendation::SecondPrice
    } else {
        Recommendation::Indifferent
    })
}

/// One row of the reference table. `e3`, `h` and `rel_err_h` are `None`
/// (printed "n.a.") for `n = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderStatRow {
    pub sigma: f64,
    pub n: u32,
    pub g_prime: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: Option<f64>,
    pub g: f64,
    pub rel_err_g: f64,
    pub h: Option<f64>,
    pub rel_err_h: Option<f64>,
}

impl OrderStatRow {
    /// Copy with every value rounded to `digits` significant digits.
    pub fn rounded(&self, digits: usize) -> Self {
        let r = |x: f64| round_sig(x, digits);
        Self {
            sigma: self.sigma,
            n: self.n,
            g_prime: r(self.g_prime),
            e1: r(self.e1),
            e2: r(self.e2),
            e3: self.e3.map(r),
            g: r(self.g),
            rel_err_g: r(self.rel_err_g),
            h: self.h.map(r),
            rel_err_h: self.rel_err_h.map(r),
        }
    }
}

pub const ORDER_STAT_COLUMNS: [&str; 10] = [
    "sigma",
    "n",
    "g_prime",
    "e1",
    "e2",
    "e3",
    "g",
    "rel_err_g",
    "h",
    "rel_err_h",
];

/// Rows for every `(n, sigma)` pair, ordered by `n` and then by `sigma` in the
/// given order.
pub fn order_stat_table(n_values: &[u32], sigma_values: &[f64]) -> Result<Vec<OrderStatRow>> {
    for &n in n_values {
        validate_n(n)?;
    }
    for &s in sigma_values {
        validate_sigma(s)?;
    }
    OrderStatEngine::global().prefill(n_values.iter().copied(), 3)?;
    let mut rows = Vec::with_capacity(n_values.len() * sigma_values.len());
    for &n in n_values {
        let e1 = standard_mean(1, n)?;
        let e2 = standard_mean(2, n)?;
        let e3 = if n >= 3 {
            Some(standard_mean(3, n)?)
        } else {
            None
        };
        for &sigma in sigma_values {
            let rep = threshold_report(n, sigma)?;
            rows.push(OrderStatRow {
                sigma,
                n,
                g_prime: rep.g_prime,
                e1: sigma * e1,
                e2: sigma * e2,
                e3: e3.map(|v| sigma * v),
                g: rep.g,
                rel_err_g: rep.rel_err_g,
                h: rep.h,
                rel_err_h: rep.rel_err_h,
            });
        }
    }
    Ok(rows)
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n.a.".to_string(), |x| crate::format::fmt_sig(x, digits))
}

/// Write rows as CSV with a header; missing cells are `n.a.`.
pub fn write_order_stat_csv<W: Write>(rows: &[OrderStatRow], digits: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(crate::error::IoError(e.to_string()));
    w.write_record(ORDER_STAT_COLUMNS).map_err(io)?;
    for row in rows {
        w.write_record([
            cell(Some(row.sigma), digits),
            row.n.to_string(),
            cell(Some(row.g_prime), digits),
            cell(Some(row.e1), digits),
            cell(Some(row.e2), digits),
            cell(row.e3, digits),
            cell(Some(row.g), digits),
            cell(Some(row.rel_err_g), digits),
            cell(row.h, digits),
            cell(row.rel_err_h, digits),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows as a JSON array; missing cells are `null`.
pub fn order_stat_json(rows: &[OrderStatRow], digits: usize) -> serde_json::Value {
    let rounded: Vec<OrderStatRow> = rows.iter().map(|r| r.rounded(digits)).collect();
    serde_json::to_value(rounded).expect("rows serialise")
}
