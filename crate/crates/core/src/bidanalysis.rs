//! Sigma estimation from first-round bids.
//!
//! The spread estimate is the population standard deviation (divisor `n`),
//! which is the convention of the published worked examples. It is biased
//! low for small samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::parse_number;
use crate::thresholds::{first_vs_second_price, threshold_report, Recommendation, ThresholdReport};

/// Observed prices of one sourcing event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidSample {
    prices: Vec<f64>,
    currency_label: String,
}

impl BidSample {
    pub fn new(prices: Vec<f64>, currency_label: impl Into<String>) -> Result<Self> {
        if prices.len() < 2 {
            return Err(Error::TooFewBids(prices.len()));
        }
        if let Some(index) = prices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteBid { index });
        }
        Ok(Self {
            prices,
            currency_label: currency_label.into(),
        })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn currency_label(&self) -> &str {
        &self.currency_label
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.prices.iter().sum::<f64>() / self.prices.len() as f64
    }
}

/// `sqrt(sum((p - mean)^2) / n)`.
pub fn estimate_sigma(sample: &BidSample) -> f64 {
    let mean = sample.mean();
    let ss: f64 = sample.prices.iter().map(|p| (p - mean) * (p - mean)).sum();
    (ss / sample.len() as f64).sqrt()
}

/// Thresholds derived from a bid sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidAnalysis {
    pub n: u32,
    pub mean: f64,
    pub sigma_hat: f64,
    /// `None` when all bids are equal, in which case every threshold is 0.
    pub thresholds: Option<ThresholdReport>,
    pub warnings: Vec<String>,
}

impl BidAnalysis {
    /// First- versus second-price verdict for margin `m`. With a degenerate
    /// sample `G = 0`, so any positive margin favours the second price.
    pub fn recommendation(&self, m: f64, band: f64) -> Result<Recommendation> {
        if self.sigma_hat > 0.0 {
            return first_vs_second_price(m, self.n, self.sigma_hat, band);
        }
        // validate m and band through the regular path with a unit sigma
        first_vs_second_price(m, self.n, 1.0, band)?;
        Ok(if m > 0.0 {
            Recommendation::SecondPrice
        } else {
            Recommendation::Indifferent
        })
    }
}

pub fn analyze_bids(sample: &BidSample) -> Result<BidAnalysis> {
    let n = u32::try_from(sample.len()).map_err(|_| Error::InvalidParameter {
        name: "n",
        value: sample.len() as f64,
        reason: "too many bids",
    })?;
    let sigma_hat = estimate_sigma(sample);
    let mut warnings = Vec::new();
    let thresholds = if sigma_hat > 0.0 {
        Some(threshold_report(n, sigma_hat)?)
    } else {
        warnings.push(
            "all bids are equal: sigma estimate is 0 and all thresholds collapse to 0".into(),
        );
        None
    };
    Ok(BidAnalysis {
        n,
        mean: sample.mean(),
        sigma_hat,
        thresholds,
        warnings,
    })
}

/// Parse a bid file.
///
/// Two layouts are accepted. Plain text holds one price per line; blank
/// lines and lines starting with `#` are skipped and a decimal comma is
/// allowed. CSV is recognised by a header containing a `price` column; with
/// `,` as delimiter prices must use a decimal point, with `;` a decimal comma
/// is allowed. Errors carry the 1-based line number.
pub fn parse_bids(text: &str) -> Result<Vec<f64>> {
    let first = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((_, header)) = first else {
        return Ok(Vec::new());
    };
    let is_header = header
        .split([',', ';'])
        .any(|f| f.trim().trim_matches('"').eq_ignore_ascii_case("price"));
    if is_header {
        parse_csv(text, if header.contains(';') { b';' } else { b',' })
    } else {
        parse_plain(text)
    }
}

fn parse_plain(text: &str) -> Result<Vec<f64>> {
    let mut prices = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let value = parse_number(t).map_err(|message| Error::Parse {
            line: idx + 1,
            message,
        })?;
        prices.push(value);
    }
    Ok(prices)
}

fn parse_csv(text: &str, delimiter: u8) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let line_of = |e: &csv::Error| {
        e.position()
            .map_or(0, |p| usize::try_from(p.line()).unwrap_or(usize::MAX))
    };
    let headers = reader.headers().map_err(|e| Error::Parse {
        line: line_of(&e),
        message: e.to_string(),
    })?;
    let column = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("price"))
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "no price column".into(),
        })?;
    let mut prices = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: line_of(&e),
            message: e.to_string(),
        })?;
        let line = record
            .position()
            .map_or(0, |p| usize::try_from(p.line()).unwrap_or(usize::MAX));
        let field = record.get(column).unwrap_or("");
        if delimiter == b',' && field.contains(',') {
            return Err(Error::Parse {
                line,
                message: "decimal comma requires ';' as CSV delimiter".into(),
            });
        }
        let value = parse_number(field).map_err(|message| Error::Parse { line, message })?;
        prices.push(value);
    }
    Ok(prices)
}
