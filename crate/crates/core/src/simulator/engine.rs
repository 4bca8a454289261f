//! Monte Carlo driver.
//!
//! All designs of a run are evaluated on the same draws. Trials are split
//! into chunks of [`CHUNK_TRIALS`]; each chunk has its own stream and its
//! own running moments, and chunk moments are merged in chunk order. The
//! parallel and sequential paths therefore return identical bits.

use serde::{Deserialize, Serialize};

use super::auctions::{
    kth_lowest, run_english_multi, run_fpsb, run_hongkong, run_pay_as_bid, run_spsb, run_two_stage,
};
use super::population::{BidderPopulation, PostCompetitionAdjustment, ValueDistribution, ValueMap};
use super::rng::{Sampler, CHUNK_TRIALS};
use crate::cube::AuctionDesign;
use crate::error::{Error, Result};
use crate::orderstats::{expected_order_stat_uniform, OrderStatEngine, OrderStatSpec};
use crate::thresholds::uniform_threshold;

/// Seed used when the caller gives none.
pub const DEFAULT_SEED: u64 = 20_210_513;

/// Largest run for which per-trial traces are produced.
pub const MAX_TRACE_TRIALS: u64 = 10_000;

/// How chunks are scheduled. `Parallel` runs sequentially when the crate is
/// built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        let w = other.count as f64 / n;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.count as f64 * w;
        self.count += other.count;
    }

    fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.count - 1) as f64;
        (var / self.count as f64).sqrt()
    }
}

/// Mean cost of one design with its standard error and analytic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub analytic_reference: Option<f64>,
    /// `|mean - reference| / std_error`
    pub z_score: Option<f64>,
}

impl SimulationResult {
    fn new(m: &Moments, reference: Option<f64>) -> Self {
        let se = m.std_error();
        let z_score = reference.map(|r| {
            let d = (m.mean - r).abs();
            if se > 0.0 {
                d / se
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        });
        Self {
            mean: m.mean,
            std_error: se,
            trials: m.count,
            analytic_reference: reference,
            z_score,
        }
    }

    pub fn within(&self, z_max: f64) -> bool {
        self.z_score.is_some_and(|z| z <= z_max)
    }
}

fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(CHUNK_TRIALS)
}

fn chunk_len(trials: u64, chunk: u64) -> u64 {
    CHUNK_TRIALS.min(trials - chunk * CHUNK_TRIALS)
}

/// Walk the trials of one chunk, handing each trial's values to `visit`.
fn walk_chunk(
    pop: &BidderPopulation,
    seed: u64,
    chunk: u64,
    trials: u64,
    mut visit: impl FnMut(&[f64]),
) {
    let mut sampler = Sampler::for_chunk(seed, chunk);
    let mut values = vec![0.0; pop.n as usize];
    for _ in 0..chunk_len(trials, chunk) {
        pop.draw_into(&mut sampler, &mut values);
        visit(&values);
    }
}

/// Run `trials` trials; `measure` writes `k` outcomes per trial.
fn run_trials<F>(
    pop: &BidderPopulation,
    trials: u64,
    seed: u64,
    exec: Execution,
    k: usize,
    measure: F,
) -> Vec<Moments>
where
    F: Fn(&[f64], &mut [f64]) + Sync + Send,
{
    let chunks: Vec<u64> = (0..chunk_count(trials)).collect();
    let partials = crate::par::map(&chunks, exec == Execution::Parallel, |&c| {
        let mut acc = vec![Moments::default(); k];
        let mut out = vec![0.0; k];
        walk_chunk(pop, seed, c, trials, |values| {
            measure(values, &mut out);
            for (m, &x) in acc.iter_mut().zip(&out) {
                m.push(x);
            }
        });
        acc
    });
    let mut total = vec![Moments::default(); k];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total
}

/// `trials x n` matrix of i.i.d. values, reproducible for a fixed seed.
pub fn draw_values(pop: &BidderPopulation, seed: u64, trials: u64) -> Result<Vec<Vec<f64>>> {
    pop.validate()?;
    check_trials(trials)?;
    let mut rows = Vec::with_capacity(usize::try_from(trials).unwrap_or(0));
    for c in 0..chunk_count(trials) {
        walk_chunk(pop, seed, c, trials, |v| rows.push(v.to_vec()));
    }
    Ok(rows)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::Config("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// A format to simulate. Margins come from the population.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimulationDesign {
    Fpsb,
    Spsb,
    English {
        #[serde(default = "one")]
        winners: u32,
    },
    Dutch,
    Hongkong {
        m: u32,
    },
    PayAsBid {
        m: u32,
    },
    /// A two-stage cube design, given by its label such as `Hongkong_Dutch`.
    TwoStage {
        design: String,
    },
}

fn one() -> u32 {
    1
}

impl SimulationDesign {
    pub fn label(&self) -> String {
        match self {
            SimulationDesign::Fpsb => "FPSB".into(),
            SimulationDesign::Spsb => "SPSB".into(),
            SimulationDesign::English { winners: 1 } => "English".into(),
            SimulationDesign::English { winners } => format!("English(m={winners})"),
            SimulationDesign::Dutch => "Dutch".into(),
            SimulationDesign::Hongkong { m } => format!("Hongkong(m={m})"),
            SimulationDesign::PayAsBid { m } => format!("PayAsBid(m={m})"),
            SimulationDesign::TwoStage { design } => design.clone(),
        }
    }
}

/// A design checked against the population.
#[derive(Debug, Clone)]
enum Compiled {
    Fpsb,
    Spsb,
    English(u32),
    Dutch,
    Hongkong(u32),
    PayAsBid(u32),
    TwoStage(AuctionDesign),
}

fn compile(design: &SimulationDesign, n: u32) -> Result<Compiled> {
    let winners = |m: u32, min: u32| {
        if m >= min && m < n {
            Ok(m)
        } else {
            Err(Error::Config(format!(
                "{}: needs {min} <= m < n = {n}",
                design.label()
            )))
        }
    };
    Ok(match design {
        SimulationDesign::Fpsb => Compiled::Fpsb,
        SimulationDesign::Spsb => Compiled::Spsb,
        SimulationDesign::English { winners: w } => Compiled::English(winners(*w, 1)?),
        SimulationDesign::Dutch => Compiled::Dutch,
        SimulationDesign::Hongkong { m } => Compiled::Hongkong(winners(*m, 2)?),
        SimulationDesign::PayAsBid { m } => Compiled::PayAsBid(winners(*m, 1)?),
        SimulationDesign::TwoStage { design } => {
            let d = AuctionDesign::from_label(design)
                .filter(AuctionDesign::is_two_stage)
                .ok_or_else(|| Error::InvalidDesign(design.clone()))?;
            if matches!(
                d,
                AuctionDesign::HongkongDutch | AuctionDesign::HongkongFpsb
            ) && n < 3
            {
                return Err(Error::InvalidDesign(format!(
                    "{design} needs at least 3 bidders"
                )));
            }
            Compiled::TwoStage(d)
        }
    })
}

impl Compiled {
    /// Cost on one trial. Open formats see adjusted values.
    fn cost(&self, values: &[f64], pop: &BidderPopulation, adj: &ValueMap) -> f64 {
        let checked = "validated at compile time";
        match self {
            Compiled::Fpsb => run_fpsb(values, pop.margin_m),
            Compiled::Spsb => run_spsb(values),
            Compiled::English(w) => run_english_multi(values, *w, adj).expect(checked),
            Compiled::Dutch => run_fpsb(values, pop.margin_dutch),
            Compiled::Hongkong(m) => {
                if adj.is_identity() {
                    run_hongkong(values, *m, pop.margin_n).expect(checked).total
                } else {
                    // the map preserves ranks, so adjusting the m-th value suffices
                    let v = adj.apply(kth_lowest(values, *m as usize));
                    f64::from(*m) * (v + pop.margin_n)
                }
            }
            Compiled::PayAsBid(m) => run_pay_as_bid(values, *m, pop.margin_m).expect(checked),
            Compiled::TwoStage(d) => run_two_stage(d, values, pop, adj).expect(checked),
        }
    }

    /// Expected cost from the order-statistic means.
    fn reference(&self, pop: &BidderPopulation, adj: &ValueMap) -> Result<f64> {
        let e = |k: u32| order_mean(&pop.distribution, k, pop.n);
        let z = |k: u32| e(k).map(|v| adj.apply(v));
        Ok(match self {
            Compiled::Fpsb => e(1)? + pop.margin_m,
            Compiled::Spsb => e(2)?,
            Compiled::English(w) => f64::from(*w) * z(w + 1)?,
            Compiled::Dutch => e(1)? + pop.margin_dutch,
            Compiled::Hongkong(m) => f64::from(*m) * (z(*m)? + pop.margin_n),
            Compiled::PayAsBid(m) => {
                let mut s = 0.0;
                for k in 1..=*m {
                    s += e(k)?;
                }
                s + f64::from(*m) * pop.margin_m
            }
            Compiled::TwoStage(d) => {
                let (hongkong_first, margin) = super::auctions::two_stage_rule(d, pop)?;
                (if hongkong_first { z(1)? } else { e(1)? }) + margin
            }
        })
    }
}

/// `E(X(k,n))` for the population's distribution.
pub fn order_mean(dist: &ValueDistribution, k: u32, n: u32) -> Result<f64> {
    let spec = OrderStatSpec::new(k, n)?;
    Ok(match *dist {
        ValueDistribution::Normal { mean, sigma } => {
            mean + sigma * OrderStatEngine::global().standard_mean(spec)?
        }
        ValueDistribution::Uniform { mean, sigma } => {
            mean + expected_order_stat_uniform(spec, sigma)?
        }
    })
}

/// A full simulation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub population: BidderPopulation,
    #[serde(default)]
    pub adjustment: Option<PostCompetitionAdjustment>,
    pub designs: Vec<SimulationDesign>,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub design: String,
    #[serde(flatten)]
    pub result: SimulationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub trials: u64,
    pub results: Vec<DesignResult>,
    pub warnings: Vec<String>,
}

struct Prepared {
    designs: Vec<Compiled>,
    adj: ValueMap,
    warnings: Vec<String>,
}

fn prepare(cfg: &SimulationConfig) -> Result<Prepared> {
    let warnings = cfg.population.validate()?;
    check_trials(cfg.trials)?;
    if cfg.designs.is_empty() {
        return Err(Error::Config("no designs requested".into()));
    }
    let designs = cfg
        .designs
        .iter()
        .map(|d| compile(d, cfg.population.n))
        .collect::<Result<Vec<_>>>()?;
    let adj = match &cfg.adjustment {
        Some(a) => a.resolve(&cfg.population.distribution)?,
        None => ValueMap::IDENTITY,
    };
    Ok(Prepared {
        designs,
        adj,
        warnings,
    })
}

/// Simulate every requested design on common draws.
pub fn simulate(cfg: &SimulationConfig, exec: Execution) -> Result<SimulationReport> {
    let p = prepare(cfg)?;
    let pop = cfg.population;
    let references = p
        .designs
        .iter()
        .map(|d| d.reference(&pop, &p.adj))
        .collect::<Result<Vec<_>>>()?;
    let moments = run_trials(
        &pop,
        cfg.trials,
        cfg.seed,
        exec,
        p.designs.len(),
        |v, out| {
            for (o, d) in out.iter_mut().zip(&p.designs) {
                *o = d.cost(v, &pop, &p.adj);
            }
        },
    );
    let results = cfg
        .designs
        .iter()
        .zip(moments.iter().zip(references))
        .map(|(d, (m, r))| DesignResult {
            design: d.label(),
            result: SimulationResult::new(m, Some(r)),
        })
        .collect();
    Ok(SimulationReport {
        seed: cfg.seed,
        trials: cfg.trials,
        results,
        warnings: p.warnings,
    })
}

/// Per-trial costs, one row per trial, for runs of at most
/// [`MAX_TRACE_TRIALS`] trials. Rows match the draws of [`simulate`].
pub fn trace(cfg: &SimulationConfig) -> Result<Vec<Vec<f64>>> {
    let p = prepare(cfg)?;
    if cfg.trials > MAX_TRACE_TRIALS {
        return Err(Error::Config(format!(
            "traces are limited to {MAX_TRACE_TRIALS} trials"
        )));
    }
    let pop = cfg.population;
    let mut rows = Vec::new();
    for c in 0..chunk_count(cfg.trials) {
        walk_chunk(&pop, cfg.seed, c, cfg.trials, |v| {
            rows.push(p.designs.iter().map(|d| d.cost(v, &pop, &p.adj)).collect());
        });
    }
    Ok(rows)
}

/// First- against second-price sealed bid on common draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceRuleComparison {
    pub n: u32,
    pub sigma: f64,
    pub margin: f64,
    pub fpsb: SimulationResult,
    pub spsb: SimulationResult,
    /// Per-trial `FPSB - SPSB`; its standard error accounts for the pairing.
    pub difference: SimulationResult,
}

/// Simulate FPSB (with the population's `M`) against SPSB.
pub fn compare_price_rules(
    pop: &BidderPopulation,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<PriceRuleComparison> {
    pop.validate()?;
    check_trials(trials)?;
    let m = pop.margin_m;
    let e1 = order_mean(&pop.distribution, 1, pop.n)?;
    let e2 = order_mean(&pop.distribution, 2, pop.n)?;
    let mom = run_trials(pop, trials, seed, exec, 3, |v, out| {
        let f = run_fpsb(v, m);
        let s = run_spsb(v);
        out[0] = f;
        out[1] = s;
        out[2] = f - s;
    });
    Ok(PriceRuleComparison {
        n: pop.n,
        sigma: pop.distribution.sigma(),
        margin: m,
        fpsb: SimulationResult::new(&mom[0], Some(e1 + m)),
        spsb: SimulationResult::new(&mom[1], Some(e2)),
        difference: SimulationResult::new(&mom[2], Some(e1 + m - e2)),
    })
}

/// Uniform values with mean 0 and the margin set to `G' = 2 sqrt(3) sigma / (n + 1)`
/// (or to `margin` when given). At `G'` a risk-neutral bidder's margin makes
/// both price rules cost the same in expectation.
pub fn revenue_equivalence_check(
    n: u32,
    sigma: f64,
    margin: Option<f64>,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<PriceRuleComparison> {
    let g_prime = uniform_threshold(n, sigma)?;
    let pop = BidderPopulation::new(n, ValueDistribution::Uniform { mean: 0.0, sigma })
        .with_margins(margin.unwrap_or(g_prime), 0.0, 0.0);
    compare_price_rules(&pop, trials, seed, exec)
}
