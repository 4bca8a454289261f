//! Expected values of order statistics.
//!
//! For the normal distribution the mean of the i-th smallest of n draws has
//! no closed form; it is obtained by adaptive quadrature of `t * f_(i)(t)`
//! against the standard normal order-statistic density and then scaled,
//! since `N(mu, sigma)` draws are `mu + sigma * N(0, 1)` draws. The uniform
//! case is closed form.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{ln_order_stat_coefficient, ln_std_normal_cdf, ln_std_normal_pdf};

/// Normal distribution of indifference prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModel {
    pub mean: f64,
    pub sigma: f64,
}

impl NormalModel {
    pub fn new(mean: f64, sigma: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean",
                value: mean,
                reason: "must be finite",
            });
        }
        validate_sigma(sigma)?;
        Ok(Self { mean, sigma })
    }

    /// Mean-zero model, the normalisation used throughout the threshold tables.
    pub fn centered(sigma: f64) -> Result<Self> {
        Self::new(0.0, sigma)
    }
}

pub(crate) fn validate_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

pub(crate) fn validate_n(n: u32) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidN(n))
    }
}

/// Rank `i` (1 = smallest) within a sample of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderStatSpec {
    rank: u32,
    sample_size: u32,
}

impl OrderStatSpec {
    pub fn new(rank: u32, sample_size: u32) -> Result<Self> {
        validate_n(sample_size)?;
        if rank == 0 || rank > sample_size {
            return Err(Error::InvalidRank { rank, sample_size });
        }
        Ok(Self { rank, sample_size })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn sample_size(&self) -> u32 {
        self.sample_size
    }

    /// The rank with the same distance from the other end, `n + 1 - i`.
    pub fn mirrored(&self) -> Self {
        Self {
            rank: self.sample_size + 1 - self.rank,
            sample_size: self.sample_size,
        }
    }
}

/// Settings of the order-statistic quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Half-width of the integration interval in standard deviations.
    pub truncation_radius: f64,
    pub target_rel_tol: f64,
    /// Maximum number of Gauss–Kronrod segments.
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            truncation_radius: 12.0,
            target_rel_tol: 1e-13,
            max_refinements: 4000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_radius >= 10.0 && self.truncation_radius.is_finite()) {
            return Err(Error::Config(format!(
                "truncation_radius {} must be >= 10",
                self.truncation_radius
            )));
        }
        if !(self.target_rel_tol > 0.0 && self.target_rel_tol <= 1e-12) {
            return Err(Error::Config(format!(
                "target_rel_tol {} must lie in (0, 1e-12]",
                self.target_rel_tol
            )));
        }
        if self.max_refinements == 0 {
            return Err(Error::Config("max_refinements must be positive".into()));
        }
        Ok(())
    }
}

/// Density of the `i`-th order statistic of `n` standard normal draws,
/// `n!/((i-1)!(n-i)!) * phi(t) * Phi(t)^(i-1) * (1 - Phi(t))^(n-i)`,
/// evaluated in log space.
pub fn order_stat_density(spec: OrderStatSpec, t: f64) -> f64 {
    let i = spec.rank;
    let n = spec.sample_size;
    let mut log_density = ln_order_stat_coefficient(i, n) + ln_std_normal_pdf(t);
    if i > 1 {
        log_density += f64::from(i - 1) * ln_std_normal_cdf(t);
    }
    if n > i {
        log_density += f64::from(n - i) * ln_std_normal_cdf(-t);
    }
    log_density.exp()
}

/// Computes and memoises `E(X(i,n))` for the standard normal distribution.
///
/// The memo is behind a `RwLock`, so one engine can serve parallel table
/// generation.
#[derive(Debug)]
pub struct OrderStatEngine {
    config: QuadratureConfig,
    memo: RwLock<HashMap<OrderStatSpec, f64>>,
}

impl OrderStatEngine {
    pub fn new(config: QuadratureConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// Shared engine with the default configuration.
    pub fn global() -> &'static OrderStatEngine {
        static ENGINE: OnceLock<OrderStatEngine> = OnceLock::new();
        ENGINE.get_or_init(|| {
            OrderStatEngine::new(QuadratureConfig::default()).expect("default config is valid")
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// `E(X(i,n))` for `N(0, 1)`.
    pub fn standard_mean(&self, spec: OrderStatSpec) -> Result<f64> {
        if let Some(&v) = self.memo.read().expect("memo lock poisoned").get(&spec) {
            return Ok(v);
        }
        let value = self.integrate_mean(spec)?;
        self.memo
            .write()
            .expect("memo lock poisoned")
            .insert(spec, value);
        Ok(value)
    }

    fn integrate_mean(&self, spec: OrderStatSpec) -> Result<f64> {
        // exact zero for the central rank of an odd sample
        if 2 * spec.rank == spec.sample_size + 1 {
            return Ok(0.0);
        }
        // the density of rank i mirrors that of rank n+1-i; integrate the
        // lower half of the ranks and negate, so the symmetry holds exactly
        if 2 * spec.rank > spec.sample_size + 1 {
            return self.standard_mean(spec.mirrored()).map(|v| -v);
        }
        let r = self.config.truncation_radius;
        let integral = quadrature::integrate(
            |t| t * order_stat_density(spec, t),
            -r,
            r,
            (2.0 * r).ceil() as usize,
            self.config.target_rel_tol,
            self.config.max_refinements,
        )?;
        Ok(integral.value)
    }

    /// `E(X(i,n))` under `model`: `mean + sigma * E_1(i,n)`.
    pub fn mean(&self, spec: OrderStatSpec, model: NormalModel) -> Result<f64> {
        Ok(model.mean + model.sigma * self.standard_mean(spec)?)
    }

    /// Fill the memo for ranks `1..=max_rank` (clamped to n) of every n in `sizes`.
    pub fn prefill(&self, sizes: impl IntoIterator<Item = u32>, max_rank: u32) -> Result<()> {
        let specs: Vec<OrderStatSpec> = sizes
            .into_iter()
            .flat_map(|n| (1..=max_rank.min(n)).map(move |i| OrderStatSpec::new(i, n)))
            .collect::<Result<_>>()?;
        crate::par::try_for_each(&specs, |s| self.standard_mean(*s).map(|_| ()))
    }
}

/// `E(X(i,n))` for a normal model using the shared engine.
pub fn expected_order_stat_normal(spec: OrderStatSpec, model: NormalModel) -> Result<f64> {
    OrderStatEngine::global().mean(spec, model)
}

/// `E(X(i,n))` for N(0,1) using the shared engine.
pub fn standard_normal_order_mean(rank: u32, sample_size: u32) -> Result<f64> {
    OrderStatEngine::global().standard_mean(OrderStatSpec::new(rank, sample_size)?)
}

/// `E(Y(i,n))` for the uniform distribution with mean 0 and standard
/// deviation `sigma`, i.e. on `(-sqrt(3) sigma, sqrt(3) sigma)`:
/// `2 sqrt(3) sigma (2i - 1 - n) / (2n + 2)`.
pub fn expected_order_stat_uniform(spec: OrderStatSpec, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    let i = f64::from(spec.rank);
    let n = f64::from(spec.sample_size);
    Ok(2.0 * 3f64.sqrt() * sigma * (2.0 * i - 1.0 - n) / (2.0 * n + 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(i: u32, n: u32) -> OrderStatSpec {
        OrderStatSpec::new(i, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(OrderStatSpec::new(1, 1), Err(Error::InvalidN(1)));
        assert!(matches!(
            OrderStatSpec::new(0, 3),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            OrderStatSpec::new(4, 3),
            Err(Error::InvalidRank { .. })
        ));
        assert_eq!(spec(2, 5).mirrored(), spec(4, 5));
    }

    #[test]
    fn quadrature_config_bounds() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let narrow = QuadratureConfig {
            truncation_radius: 8.0,
            ..Default::default()
        };
        assert!(narrow.validate().is_err());
        let loose = QuadratureConfig {
            target_rel_tol: 1e-8,
            ..Default::default()
        };
        assert!(OrderStatEngine::new(loose).is_err());
    }

    #[test]
    fn density_examples() {
        // 2 * phi(0) * (1 - Phi(0)) = phi(0)
        let d = order_stat_density(spec(1, 2), 0.0);
        assert!((d - 0.398_942_280_4).abs() < 1e-10);
        let m = spec(2, 3);
        assert!((order_stat_density(m, 1.3) - order_stat_density(m, -1.3)).abs() < 1e-16);
    }

    #[test]
    fn density_large_n_has_no_overflow() {
        let s = spec(3, 100);
        for k in -120..=120 {
            let v = order_stat_density(s, k as f64 * 0.1);
            assert!(v.is_finite() && v >= 0.0);
        }
    }

    #[test]
    fn closed_form_small_samples() {
        // E(max of 2) = 1/sqrt(pi), E(max of 3) = 3/(2 sqrt(pi)),
        // E(max of 4) = 3/(2 sqrt(pi)) (1 + 2/pi asin(1/3)),
        // E(max of 5) = 5/(4 sqrt(pi)) (1 + 6/pi asin(1/3))
        let sp = PI.sqrt();
        let asin = (1.0f64 / 3.0).asin();
        let cases = [
            (2, 1.0 / sp),
            (3, 1.5 / sp),
            (4, 1.5 / sp * (1.0 + 2.0 / PI * asin)),
            (5, 1.25 / sp * (1.0 + 6.0 / PI * asin)),
        ];
        for (n, want) in cases {
            let got = standard_normal_order_mean(n, n).unwrap();
            assert!((got - want).abs() < 1e-13, "n={n}: {got} vs {want}");
            let low = standard_normal_order_mean(1, n).unwrap();
            assert_eq!(low, -got);
        }
    }

    #[test]
    fn table_examples() {
        let e22 = standard_normal_order_mean(2, 2).unwrap();
        assert!((e22 - 0.564_189_584).abs() < 5e-10);
        let model = NormalModel::centered(3.7).unwrap();
        assert_eq!(expected_order_stat_normal(spec(2, 3), model).unwrap(), 0.0);
        let e14 = standard_normal_order_mean(1, 4).unwrap();
        assert!((e14 + 1.029_375_373).abs() < 5e-10);
        let ten = NormalModel::centered(10.0).unwrap();
        let e15 = expected_order_stat_normal(spec(1, 5), ten).unwrap();
        assert!((e15 + 11.629_644_74).abs() < 5e-9);
    }

    #[test]
    fn shifted_model() {
        let model = NormalModel::new(100.0, 2.0).unwrap();
        let e = expected_order_stat_normal(spec(1, 2), model).unwrap();
        assert!((e - (100.0 - 2.0 / PI.sqrt())).abs() < 1e-12);
        assert!(NormalModel::new(f64::NAN, 1.0).is_err());
        assert_eq!(NormalModel::centered(0.0), Err(Error::InvalidSigma(0.0)));
    }

    #[test]
    fn uniform_closed_form() {
        let s = 1.0 / (2.0 * 3f64.sqrt());
        let v = expected_order_stat_uniform(spec(3, 6), s).unwrap();
        assert!((v + 1.0 / 14.0).abs() < 1e-15);
        assert_eq!(expected_order_stat_uniform(spec(3, 5), 2.0).unwrap(), 0.0);
        let v = expected_order_stat_uniform(spec(2, 4), 1.0).unwrap();
        assert!((v + 2.0 * 3f64.sqrt() / 10.0).abs() < 1e-15);
        assert!((v + 0.346_410_161_5).abs() < 1e-10);
        assert!(expected_order_stat_uniform(spec(1, 2), -1.0).is_err());
    }

    #[test]
    fn uniform_matches_beta_means() {
        // Y(i,n) on (0,1) has mean i/(n+1); map (0,1) onto (-sqrt3 s, sqrt3 s)
        let s = 0.7;
        let width = 2.0 * 3f64.sqrt() * s;
        for n in 2..=6u32 {
            for i in 1..=n {
                let beta = f64::from(i) / f64::from(n + 1);
                let want = -width / 2.0 + width * beta;
                let got = expected_order_stat_uniform(spec(i, n), s).unwrap();
                assert!((got - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn custom_engine_agrees_with_global() {
        let engine = OrderStatEngine::new(QuadratureConfig {
            truncation_radius: 14.0,
            target_rel_tol: 1e-14,
            max_refinements: 8000,
        })
        .unwrap();
        for n in [2u32, 7, 40, 100] {
            let a = engine.standard_mean(spec(1, n)).unwrap();
            let b = standard_normal_order_mean(1, n).unwrap();
            assert!((a - b).abs() < 1e-13 * a.abs());
        }
    }

    #[test]
    fn non_convergence_surfaces() {
        let engine = OrderStatEngine::new(QuadratureConfig {
            truncation_radius: 12.0,
            target_rel_tol: 1e-13,
            max_refinements: 1,
        })
        .unwrap();
        assert!(matches!(
            engine.standard_mean(spec(1, 50)),
            Err(Error::NonConvergence { .. })
        ));
    }
}
