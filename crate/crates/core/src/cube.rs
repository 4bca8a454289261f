//! The auction cube: a precondition gate followed by a 2x2x2 classification
//! over bidder count, strategic margin and price spread, each corner mapped
//! to one (possibly two-stage) auction design.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orderstats::{validate_n, validate_sigma};
use crate::thresholds::{first_vs_second_price, g_factor, Recommendation, DEFAULT_BAND};

/// Default cutoff of `sigma / |mean price|` above which the spread is large.
pub const DEFAULT_SIGMA_RATIO: f64 = 0.05;

/// Negotiation formats to use instead of an auction. Names only.
pub const ALTERNATIVES: [&str; 5] = [
    "take-it-or-leave-it chains",
    "take-it-or-auction offers",
    "first-call options",
    "last-call options",
    "offer rounds with hidden target prices",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preconditions {
    pub collusive_market: bool,
    pub comparable_bidders: bool,
    pub single_lot: bool,
    pub bidder_count: u32,
    pub bidders_know_count: bool,
}

/// A rule that rules out running an auction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    CollusiveMarket,
    IncomparableBidders,
    MultipleLots,
    SingleBidder,
    TwoBiddersAwareOfCount,
}

impl Violation {
    pub fn reason(&self) -> &'static str {
        match self {
            Violation::CollusiveMarket => "collusive market",
            Violation::IncomparableBidders => "bidders not comparable",
            Violation::MultipleLots => "more than one lot",
            Violation::SingleBidder => "fewer than two bidders",
            Violation::TwoBiddersAwareOfCount => "two bidders aware of count",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.reason())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PreconditionCheck {
    Ok,
    Rejected(Vec<Violation>),
}

impl PreconditionCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PreconditionCheck::Ok)
    }

    /// `None` when the auction may proceed, otherwise the `NotRecommended` design.
    pub fn rejection(&self) -> Option<AuctionDesign> {
        match self {
            PreconditionCheck::Ok => None,
            PreconditionCheck::Rejected(v) => Some(AuctionDesign::NotRecommended {
                reasons: v.iter().map(|r| r.reason().to_string()).collect(),
                alternatives: ALTERNATIVES.iter().map(|a| a.to_string()).collect(),
            }),
        }
    }
}

/// Passes iff the market is not collusive, the bidders are comparable, there
/// is one lot, and there are at least three bidders or exactly two who do
/// not know that they are only two.
pub fn check_preconditions(p: &Preconditions) -> PreconditionCheck {
    let mut violations = Vec::new();
    if p.collusive_market {
        violations.push(Violation::CollusiveMarket);
    }
    if !p.comparable_bidders {
        violations.push(Violation::IncomparableBidders);
    }
    if !p.single_lot {
        violations.push(Violation::MultipleLots);
    }
    match p.bidder_count {
        0 | 1 => violations.push(Violation::SingleBidder),
        2 if p.bidders_know_count => violations.push(Violation::TwoBiddersAwareOfCount),
        _ => {}
    }
    if violations.is_empty() {
        PreconditionCheck::Ok
    } else {
        PreconditionCheck::Rejected(violations)
    }
}

/// One corner of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeCorner {
    /// `n >= 4`
    pub n_large: bool,
    /// Small strategic margin, `M < G`.
    pub risk_aversion_high: bool,
    pub sigma_large: bool,
}

impl CubeCorner {
    pub fn all() -> [CubeCorner; 8] {
        let mut out = [CubeCorner {
            n_large: false,
            risk_aversion_high: false,
            sigma_large: false,
        }; 8];
        for (k, c) in out.iter_mut().enumerate() {
            c.n_large = k & 4 != 0;
            c.risk_aversion_high = k & 2 != 0;
            c.sigma_large = k & 1 != 0;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "design")]
pub enum AuctionDesign {
    English,
    #[serde(rename = "Hongkong_FPSB")]
    HongkongFpsb,
    #[serde(rename = "Hongkong_Dutch")]
    HongkongDutch,
    #[serde(rename = "FPSB_FPSB")]
    FpsbFpsb,
    /// First stage with a reserve-style disclosure, second stage FPSB.
    #[serde(rename = "FPSBR_FPSB")]
    FpsbrFpsb,
    #[serde(rename = "FPSB_Dutch")]
    FpsbDutch,
    NotRecommended {
        reasons: Vec<String>,
        alternatives: Vec<String>,
    },
}

impl AuctionDesign {
    pub fn label(&self) -> &'static str {
        match self {
            AuctionDesign::English => "English",
            AuctionDesign::HongkongFpsb => "Hongkong_FPSB",
            AuctionDesign::HongkongDutch => "Hongkong_Dutch",
            AuctionDesign::FpsbFpsb => "FPSB_FPSB",
            AuctionDesign::FpsbrFpsb => "FPSBR_FPSB",
            AuctionDesign::FpsbDutch => "FPSB_Dutch",
            AuctionDesign::NotRecommended { .. } => "NotRecommended",
        }
    }

    pub fn is_two_stage(&self) -> bool {
        matches!(
            self,
            AuctionDesign::HongkongFpsb
                | AuctionDesign::HongkongDutch
                | AuctionDesign::FpsbFpsb
                | AuctionDesign::FpsbrFpsb
                | AuctionDesign::FpsbDutch
        )
    }

    /// Parse a label as produced by [`AuctionDesign::label`].
    pub fn from_label(label: &str) -> Option<Self> {
        Some(match label {
            "English" => AuctionDesign::English,
            "Hongkong_FPSB" => AuctionDesign::HongkongFpsb,
            "Hongkong_Dutch" => AuctionDesign::HongkongDutch,
            "FPSB_FPSB" => AuctionDesign::FpsbFpsb,
            "FPSBR_FPSB" => AuctionDesign::FpsbrFpsb,
            "FPSB_Dutch" => AuctionDesign::FpsbDutch,
            _ => return None,
        })
    }

    /// Informational notes that go with the design.
    pub fn notes(&self) -> Vec<&'static str> {
        match self {
            AuctionDesign::English | AuctionDesign::HongkongFpsb | AuctionDesign::HongkongDutch => {
                vec![
                    "whether the ticker shows the number of remaining bidders is left to the buyer",
                ]
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for AuctionDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The fixed corner-to-design table.
pub fn recommend(corner: CubeCorner) -> AuctionDesign {
    match (
        corner.n_large,
        corner.risk_aversion_high,
        corner.sigma_large,
    ) {
        (true, false, false) => AuctionDesign::English,
        (true, false, true) => AuctionDesign::HongkongFpsb,
        (true, true, _) => AuctionDesign::HongkongDutch,
        (false, false, false) => AuctionDesign::FpsbFpsb,
        (false, false, true) => AuctionDesign::FpsbrFpsb,
        (false, true, _) => AuctionDesign::FpsbDutch,
    }
}

/// Inputs to [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Situation {
    pub n: u32,
    /// Strategic margin `M`.
    pub margin: f64,
    pub sigma: f64,
    /// Mean price level, used by the spread heuristic.
    pub mean_price: Option<f64>,
    pub sigma_large_override: Option<bool>,
    pub band: f64,
    pub sigma_ratio: f64,
}

impl Situation {
    pub fn new(n: u32, margin: f64, sigma: f64) -> Self {
        Self {
            n,
            margin,
            sigma,
            mean_price: None,
            sigma_large_override: None,
            band: DEFAULT_BAND,
            sigma_ratio: DEFAULT_SIGMA_RATIO,
        }
    }

    pub fn with_mean_price(mut self, mean: f64) -> Self {
        self.mean_price = Some(mean);
        self
    }

    pub fn with_sigma_large(mut self, large: bool) -> Self {
        self.sigma_large_override = Some(large);
        self
    }

    pub fn with_band(mut self, band: f64) -> Self {
        self.band = band;
        self
    }
}

/// How the spread axis was decided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SigmaAxis {
    Override,
    Heuristic { ratio: f64, cutoff: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub corner: CubeCorner,
    /// `G = g(n) sigma`
    pub g: f64,
    pub margin_verdict: Recommendation,
    pub sigma_axis: SigmaAxis,
    pub warnings: Vec<String>,
}

/// Place a situation in the cube.
///
/// A margin inside the indifference band counts as high risk aversion, which
/// leads to first-price finals. Without an override the spread axis uses
/// `sigma / |mean price| > sigma_ratio`; with neither an override nor a
/// nonzero mean price it cannot be decided.
pub fn classify(s: &Situation) -> Result<Classification> {
    validate_n(s.n)?;
    validate_sigma(s.sigma)?;
    let verdict = first_vs_second_price(s.margin, s.n, s.sigma, s.band)?;
    let g = g_factor(s.n)? * s.sigma;
    let mut warnings = Vec::new();
    let (sigma_large, sigma_axis) = match (s.sigma_large_override, s.mean_price) {
        (Some(large), _) => (large, SigmaAxis::Override),
        (None, Some(mean)) if mean.is_finite() && mean != 0.0 => {
            if !(s.sigma_ratio.is_finite() && s.sigma_ratio > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "sigma_ratio",
                    value: s.sigma_ratio,
                    reason: "must be finite and > 0",
                });
            }
            let ratio = s.sigma / mean.abs();
            warnings.push(format!(
                "sigma axis decided by heuristic: sigma/|mean| = {ratio:.4} against cutoff {}",
                s.sigma_ratio
            ));
            (
                ratio > s.sigma_ratio,
                SigmaAxis::Heuristic {
                    ratio,
                    cutoff: s.sigma_ratio,
                },
            )
        }
        _ => return Err(Error::SigmaAxisUndetermined),
    };
    Ok(Classification {
        corner: CubeCorner {
            n_large: s.n >= 4,
            risk_aversion_high: verdict != Recommendation::SecondPrice,
            sigma_large,
        },
        g,
        margin_verdict: verdict,
        sigma_axis,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok_pre(count: u32) -> Preconditions {
        Preconditions {
            collusive_market: false,
            comparable_bidders: true,
            single_lot: true,
            bidder_count: count,
            bidders_know_count: true,
        }
    }

    #[test]
    fn precondition_examples() {
        assert!(check_preconditions(&ok_pre(5)).is_ok());
        let p = Preconditions {
            collusive_market: true,
            ..ok_pre(5)
        };
        assert_eq!(
            check_preconditions(&p),
            PreconditionCheck::Rejected(vec![Violation::CollusiveMarket])
        );
        assert_eq!(
            check_preconditions(&ok_pre(2)),
            PreconditionCheck::Rejected(vec![Violation::TwoBiddersAwareOfCount])
        );
        let hidden = Preconditions {
            bidders_know_count: false,
            ..ok_pre(2)
        };
        assert!(check_preconditions(&hidden).is_ok());
        assert!(!check_preconditions(&ok_pre(1)).is_ok());
        let design = check_preconditions(&ok_pre(1)).rejection().unwrap();
        match design {
            AuctionDesign::NotRecommended {
                reasons,
                alternatives,
            } => {
                assert_eq!(reasons, vec!["fewer than two bidders"]);
                assert_eq!(alternatives.len(), 5);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn corner_table() {
        let c = |n, r, s| CubeCorner {
            n_large: n,
            risk_aversion_high: r,
            sigma_large: s,
        };
        assert_eq!(recommend(c(true, true, true)), AuctionDesign::HongkongDutch);
        assert_eq!(recommend(c(false, false, true)), AuctionDesign::FpsbrFpsb);
        assert_eq!(recommend(c(true, false, false)), AuctionDesign::English);
        assert_eq!(CubeCorner::all().len(), 8);
    }

    #[test]
    fn classify_examples() {
        let s = Situation::new(5, 1.0, 7.2).with_mean_price(102.0);
        let c = classify(&s).unwrap();
        assert!(c.corner.n_large && c.corner.risk_aversion_high);
        assert!(c.corner.sigma_large);
        let s = Situation::new(3, 10.0, 0.7).with_sigma_large(false);
        let c = classify(&s).unwrap();
        assert!(!c.corner.n_large && !c.corner.risk_aversion_high);
        let g = g_factor(4).unwrap() * 2.0;
        let s = Situation::new(4, g, 2.0)
            .with_band(0.0)
            .with_sigma_large(true);
        let c = classify(&s).unwrap();
        assert_eq!(c.margin_verdict, Recommendation::Indifferent);
        assert!(c.corner.risk_aversion_high);
        assert_eq!(
            classify(&Situation::new(4, 1.0, 2.0)),
            Err(Error::SigmaAxisUndetermined)
        );
    }

    #[test]
    fn labels_round_trip() {
        for corner in CubeCorner::all() {
            let d = recommend(corner);
            assert_eq!(AuctionDesign::from_label(d.label()), Some(d.clone()));
            assert!(d.is_two_stage() || d == AuctionDesign::English);
        }
        let json = serde_json::to_string(&AuctionDesign::FpsbrFpsb).unwrap();
        assert_eq!(json, r#"{"design":"FPSBR_FPSB"}"#);
    }
}
