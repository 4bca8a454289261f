//! Event descriptors for the `recommend` command.

use auction_cube::cube::{check_preconditions, classify, recommend as design_for, SigmaAxis};
use auction_cube::thresholds::{Recommendation, DEFAULT_BAND};
use auction_cube::{analyze_bids, AuctionDesign, BidSample, Preconditions, Situation};
use serde::Deserialize;

use crate::output::{Cell, Report};
use crate::Failure;

/// Market conditions; the bidder count comes from the bids or `n`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventPreconditions {
    pub collusive_market: bool,
    pub comparable_bidders: bool,
    pub single_lot: bool,
    pub bidders_know_count: bool,
}

/// Either `bids`, or `n` together with `sigma`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    #[serde(default)]
    pub bids: Option<Vec<f64>>,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub sigma: Option<f64>,
    pub margin: f64,
    pub preconditions: EventPreconditions,
    #[serde(default)]
    pub sigma_large: Option<bool>,
    #[serde(default)]
    pub mean_price: Option<f64>,
    #[serde(default)]
    pub band: Option<f64>,
}

pub fn verdict(r: Recommendation) -> &'static str {
    match r {
        Recommendation::FirstPrice => "first_price",
        Recommendation::SecondPrice => "second_price",
        Recommendation::Indifferent => "indifferent",
    }
}

pub fn parse_event(text: &str) -> Result<Event, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::usage(format!("event: {e}")))
}

pub fn recommend(text: &str, band_flag: Option<f64>) -> Result<(Report, Vec<String>), Failure> {
    let ev = parse_event(text)?;
    let mut warnings = Vec::new();
    let (n, sigma, mean) = match (&ev.bids, ev.n, ev.sigma) {
        (Some(bids), None, None) => {
            let a = analyze_bids(&BidSample::new(bids.clone(), "")?)?;
            warnings.extend(a.warnings);
            (a.n, a.sigma_hat, ev.mean_price.or(Some(a.mean)))
        }
        (None, Some(n), Some(sigma)) => (n, sigma, ev.mean_price),
        _ => {
            return Err(Failure::usage(
                "event: give either \"bids\" or both \"n\" and \"sigma\"",
            ))
        }
    };
    let pre = Preconditions {
        collusive_market: ev.preconditions.collusive_market,
        comparable_bidders: ev.preconditions.comparable_bidders,
        single_lot: ev.preconditions.single_lot,
        bidder_count: n,
        bidders_know_count: ev.preconditions.bidders_know_count,
    };
    let mut fields = vec![
        ("n", Cell::Int(n.into())),
        ("sigma", Cell::Num(sigma)),
        ("margin", Cell::Num(ev.margin)),
    ];
    if let Some(AuctionDesign::NotRecommended {
        reasons,
        alternatives,
    }) = check_preconditions(&pre).rejection()
    {
        fields.push(("design", Cell::text("NotRecommended")));
        fields.push(("reasons", Cell::List(reasons)));
        fields.push(("alternatives", Cell::List(alternatives)));
        fields.push(("warnings", Cell::List(warnings.clone())));
        return Ok((Report::Record(fields), warnings));
    }

    let mut situation = Situation::new(n, ev.margin, sigma)
        .with_band(band_flag.or(ev.band).unwrap_or(DEFAULT_BAND));
    if let Some(m) = mean {
        situation = situation.with_mean_price(m);
    }
    if let Some(large) = ev.sigma_large {
        situation = situation.with_sigma_large(large);
    }
    let c = classify(&situation)?;
    warnings.extend(c.warnings.iter().cloned());
    let design = design_for(c.corner);
    let axis = match c.sigma_axis {
        SigmaAxis::Override => "override".to_string(),
        SigmaAxis::Heuristic { .. } => "heuristic".to_string(),
    };
    fields.extend([
        ("g", Cell::Num(c.g)),
        ("margin_verdict", Cell::text(verdict(c.margin_verdict))),
        ("n_large", Cell::Bool(c.corner.n_large)),
        (
            "risk_aversion_high",
            Cell::Bool(c.corner.risk_aversion_high),
        ),
        ("sigma_large", Cell::Bool(c.corner.sigma_large)),
        ("sigma_axis", Cell::Text(axis)),
        ("design", Cell::text(design.label())),
        (
            "notes",
            Cell::List(design.notes().into_iter().map(String::from).collect()),
        ),
        ("warnings", Cell::List(warnings.clone())),
    ]);
    Ok((Report::Record(fields), warnings))
}
