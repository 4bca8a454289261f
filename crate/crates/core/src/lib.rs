//! Order-statistic thresholds for choosing a reverse-auction design.
//!
//! The crate computes expected order statistics of normally and uniformly
//! distributed indifference prices, the first-versus-second-price thresholds
//! built from them, a decision cube that maps an auction situation onto one
//! of six designs, and a Monte Carlo simulator that checks the expected-cost
//! claims behind the cube.

pub mod bidanalysis;
pub mod cube;
pub mod error;
pub mod format;
pub mod orderstats;
pub mod par;
pub mod quadrature;
pub mod simulator;
pub mod special;
pub mod thresholds;

pub use bidanalysis::{analyze_bids, estimate_sigma, BidAnalysis, BidSample};
pub use cube::{
    check_preconditions, classify, recommend, AuctionDesign, CubeCorner, PreconditionCheck,
    Preconditions, Situation,
};
pub use error::{Error, Result};
pub use orderstats::{
    expected_order_stat_normal, expected_order_stat_uniform, order_stat_density,
    standard_normal_order_mean, NormalModel, OrderStatEngine, OrderStatSpec, QuadratureConfig,
};
pub use thresholds::{
    first_vs_second_price, g_factor, g_factor_exact, h_factor, h_factor_exact, threshold_report,
    Recommendation, ThresholdReport,
};
