//! Buyer cost of one auction on one trial's values.
//!
//! Values are the bidders' indifference prices in any order; lower is
//! better for the buyer. Every function works in the sealed-bid equivalent
//! of its format, so open auctions end at the price where the last
//! competitor drops out. Ties cannot change a payment, only which of the
//! tied bidders wins (the lower index).

use serde::{Deserialize, Serialize};

use super::population::{BidderPopulation, ValueMap};
use crate::cube::AuctionDesign;
use crate::error::{Error, Result};

const STACK: usize = 32;

/// Call `f` with the values sorted ascending.
fn with_sorted<R>(values: &[f64], f: impl FnOnce(&[f64]) -> R) -> R {
    if values.len() <= STACK {
        let mut buf = [0.0; STACK];
        let s = &mut buf[..values.len()];
        s.copy_from_slice(values);
        s.sort_unstable_by(f64::total_cmp);
        f(s)
    } else {
        let mut v = values.to_vec();
        v.sort_unstable_by(f64::total_cmp);
        f(&v)
    }
}

/// The `k`-th lowest value, `k` counted from 1.
pub fn kth_lowest(values: &[f64], k: usize) -> f64 {
    assert!(k >= 1 && k <= values.len(), "rank {k} out of range");
    if k == 1 {
        return values.iter().copied().fold(f64::INFINITY, f64::min);
    }
    with_sorted(values, |s| s[k - 1])
}

fn winners_check(m: u32, n: usize, min_m: u32) -> Result<()> {
    if (m as usize) < n && m >= min_m {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "m",
            value: f64::from(m),
            reason: "number of winners must satisfy the format's bound and be below n",
        })
    }
}

/// First-price sealed bid: everyone bids value + `m`, the lowest bid is paid.
pub fn run_fpsb(values: &[f64], m: f64) -> f64 {
    kth_lowest(values, 1) + m
}

/// Second-price sealed bid with truthful bids: the second-lowest value.
pub fn run_spsb(values: &[f64]) -> f64 {
    kth_lowest(values, 2)
}

/// English (descending ticker) auction: the second-lowest adjusted value.
pub fn run_english(values: &[f64], adj: &ValueMap) -> f64 {
    adj.apply(kth_lowest(values, 2))
}

/// English auction run until `winners` bidders remain; each is paid the
/// `(winners + 1)`-th lowest adjusted value. Returns the total cost.
pub fn run_english_multi(values: &[f64], winners: u32, adj: &ValueMap) -> Result<f64> {
    winners_check(winners, values.len(), 1)?;
    Ok(f64::from(winners) * adj.apply(kth_lowest(values, winners as usize + 1)))
}

/// Dutch (ascending clock) auction, first-price equivalent with its own margin.
pub fn run_dutch(values: &[f64], m_dutch: f64) -> f64 {
    kth_lowest(values, 1) + m_dutch
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HongkongOutcome {
    /// Uniform price paid to each winner.
    pub price_each: f64,
    pub total: f64,
}

/// Hongkong auction with `m` winners: the `m` lowest bidders each receive
/// the `m`-th lowest value plus `n_margin`.
pub fn run_hongkong(values: &[f64], m: u32, n_margin: f64) -> Result<HongkongOutcome> {
    winners_check(m, values.len(), 2)?;
    let price_each = kth_lowest(values, m as usize) + n_margin;
    Ok(HongkongOutcome {
        price_each,
        total: f64::from(m) * price_each,
    })
}

/// Pay-as-bid with `m` winners: the sum of the `m` lowest values plus `m` margins.
pub fn run_pay_as_bid(values: &[f64], m: u32, margin: f64) -> Result<f64> {
    winners_check(m, values.len(), 1)?;
    let k = m as usize;
    let lowest: f64 = with_sorted(values, |s| s[..k].iter().sum());
    Ok(lowest + f64::from(m) * margin)
}

/// Two-stage design: stage 1 shortlists the two lowest bidders, stage 2
/// awards the lower of them at its value plus the stage-2 margin (`M` for
/// FPSB, `M_dutch` for Dutch). After a Hongkong first stage the values are
/// the adjusted ones; a sealed first stage leaves them unchanged. The
/// FPSBR variant prices exactly like FPSB_FPSB.
pub fn run_two_stage(
    design: &AuctionDesign,
    values: &[f64],
    pop: &BidderPopulation,
    adj: &ValueMap,
) -> Result<f64> {
    let (hongkong_first, margin) = two_stage_rule(design, pop)?;
    if hongkong_first && values.len() < 3 {
        return Err(Error::InvalidDesign(format!(
            "{design} needs at least 3 bidders"
        )));
    }
    if values.len() < 2 {
        return Err(Error::InvalidN(values.len() as u32));
    }
    let best = kth_lowest(values, 1);
    let best = if hongkong_first {
        adj.apply(best)
    } else {
        best
    };
    Ok(best + margin)
}

/// `(hongkong_first, stage-2 margin)` for a two-stage design.
pub(crate) fn two_stage_rule(
    design: &AuctionDesign,
    pop: &BidderPopulation,
) -> Result<(bool, f64)> {
    Ok(match design {
        AuctionDesign::HongkongDutch => (true, pop.margin_dutch),
        AuctionDesign::HongkongFpsb => (true, pop.margin_m),
        AuctionDesign::FpsbFpsb | AuctionDesign::FpsbrFpsb => (false, pop.margin_m),
        AuctionDesign::FpsbDutch => (false, pop.margin_dutch),
        other => return Err(Error::InvalidDesign(other.label().to_string())),
    })
}
