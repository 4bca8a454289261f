//! Seeded Monte Carlo auctions with analytic references.

pub mod auctions;
pub mod engine;
pub mod population;
pub mod rng;

pub use auctions::{
    kth_lowest, run_dutch, run_english, run_english_multi, run_fpsb, run_hongkong, run_pay_as_bid,
    run_spsb, run_two_stage, HongkongOutcome,
};
pub use engine::{
    compare_price_rules, draw_values, order_mean, revenue_equivalence_check, simulate, trace,
    DesignResult, Execution, PriceRuleComparison, SimulationConfig, SimulationDesign,
    SimulationReport, SimulationResult, DEFAULT_SEED, MAX_TRACE_TRIALS,
};
pub use population::{BidderPopulation, PostCompetitionAdjustment, ValueDistribution, ValueMap};
