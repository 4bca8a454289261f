//! Bidder populations and the post-competition value map.

use serde::{Deserialize, Serialize};

use super::rng::Sampler;
use crate::error::{Error, Result};
use crate::orderstats::{validate_n, validate_sigma};

/// Distribution of the bidders' indifference prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueDistribution {
    Normal {
        mean: f64,
        sigma: f64,
    },
    /// Uniform on `mean +- sqrt(3) sigma`, so that `sigma` is its standard deviation.
    Uniform {
        mean: f64,
        sigma: f64,
    },
}

impl ValueDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            ValueDistribution::Normal { mean, .. } | ValueDistribution::Uniform { mean, .. } => {
                mean
            }
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            ValueDistribution::Normal { sigma, .. } | ValueDistribution::Uniform { sigma, .. } => {
                sigma
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mean().is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean",
                value: self.mean(),
                reason: "must be finite",
            });
        }
        validate_sigma(self.sigma())
    }

    pub fn sample(&self, s: &mut Sampler) -> f64 {
        match *self {
            ValueDistribution::Normal { mean, sigma } => mean + sigma * s.standard_normal(),
            ValueDistribution::Uniform { mean, sigma } => {
                mean + 3f64.sqrt() * sigma * (2.0 * s.uniform() - 1.0)
            }
        }
    }
}

fn margin(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

/// `n` bidders with i.i.d. values and the exogenous strategic margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BidderPopulation {
    pub n: u32,
    pub distribution: ValueDistribution,
    /// Margin `M` added in first-price formats.
    #[serde(default)]
    pub margin_m: f64,
    /// Margin `N` added in Hongkong auctions.
    #[serde(default)]
    pub margin_n: f64,
    /// Margin used in Dutch auctions, typically at most `M`.
    #[serde(default)]
    pub margin_dutch: f64,
}

impl BidderPopulation {
    pub fn new(n: u32, distribution: ValueDistribution) -> Self {
        Self {
            n,
            distribution,
            margin_m: 0.0,
            margin_n: 0.0,
            margin_dutch: 0.0,
        }
    }

    pub fn with_margins(mut self, m: f64, n_margin: f64, dutch: f64) -> Self {
        self.margin_m = m;
        self.margin_n = n_margin;
        self.margin_dutch = dutch;
        self
    }

    /// Check the parameters; soft problems come back as warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        validate_n(self.n)?;
        self.distribution.validate()?;
        margin("margin_m", self.margin_m)?;
        margin("margin_n", self.margin_n)?;
        margin("margin_dutch", self.margin_dutch)?;
        let mut warnings = Vec::new();
        if self.margin_n > 0.0 && self.margin_n >= self.margin_m {
            warnings.push(format!(
                "Hongkong margin N = {} is not below M = {}; bidders are expected to keep 0 < N < M",
                self.margin_n, self.margin_m
            ));
        }
        if self.margin_dutch > self.margin_m {
            warnings.push(format!(
                "Dutch margin {} exceeds M = {}",
                self.margin_dutch, self.margin_m
            ));
        }
        Ok(warnings)
    }

    /// Fill `out` with one trial's values.
    pub fn draw_into(&self, s: &mut Sampler, out: &mut [f64]) {
        for v in out {
            *v = self.distribution.sample(s);
        }
    }
}

/// Exogenous shift of the value distribution during open formats: the mean
/// moves by `mean_shift` and the spread becomes `sigma_post`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PostCompetitionAdjustment {
    #[serde(default)]
    pub mean_shift: f64,
    pub sigma_post: f64,
}

impl PostCompetitionAdjustment {
    /// The adjustment that leaves `dist` unchanged.
    pub fn identity(dist: &ValueDistribution) -> Self {
        Self {
            mean_shift: 0.0,
            sigma_post: dist.sigma(),
        }
    }

    /// The affine map of values drawn from `dist`.
    pub fn resolve(&self, dist: &ValueDistribution) -> Result<ValueMap> {
        if !self.mean_shift.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean_shift",
                value: self.mean_shift,
                reason: "must be finite",
            });
        }
        validate_sigma(self.sigma_post)?;
        Ok(ValueMap {
            center: dist.mean(),
            shift: self.mean_shift,
            scale: self.sigma_post / dist.sigma(),
        })
    }
}

/// `x -> center + shift + (x - center) * scale`, with `scale > 0`.
///
/// Increasing, so it preserves ranks and commutes with expectations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueMap {
    pub center: f64,
    pub shift: f64,
    pub scale: f64,
}

impl ValueMap {
    pub const IDENTITY: ValueMap = ValueMap {
        center: 0.0,
        shift: 0.0,
        scale: 1.0,
    };

    pub fn apply(&self, x: f64) -> f64 {
        if *self == Self::IDENTITY {
            return x;
        }
        self.center + self.shift + (x - self.center) * self.scale
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0.0 && self.scale == 1.0
    }
}
