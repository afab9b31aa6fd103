//! Multi-Bernoulli random finite sets and Monte Carlo estimates of
//! `E[d(X, Y)^p']^(1/p')` for the set metrics in [`crate::metrics`].
//!
//! Every draw is derived from a master seed: sample `k` uses the `k`-th output
//! of a SplitMix64 stream started at the master seed, the truth and estimate
//! sets of that sample each get their own sub-seed, and per-sample values are
//! reduced in index order. Results are therefore bit-identical whether the
//! samples are evaluated serially or on any number of threads.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GospaError, Result};
use crate::metrics::{gospa, ospa_with_base, unnormalized_ospa, GospaParams, TargetSet};
use crate::scalar::Scalar;

/// Monte Carlo sample count used when none is given.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Diagonal loading tried once when a covariance is only semidefinite.
pub const CHOLESKY_JITTER: f64 = 1e-10;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `index`-th output of the SplitMix64 stream seeded with `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

/// One Bernoulli RFS: empty with probability `1 - existence`, otherwise a
/// single Gaussian point.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliComponent<T> {
    existence: T,
    mean: Vec<T>,
    covariance: Vec<Vec<T>>,
    /// Lower-triangular factor, row-major `N x N`.
    factor: Vec<T>,
}

impl<T: Scalar> BernoulliComponent<T> {
    pub fn new(existence: T, mean: Vec<T>, covariance: Vec<Vec<T>>) -> Result<Self> {
        if !(existence >= T::zero() && existence <= T::one()) {
            return Err(GospaError::InvalidInput(format!(
                "existence probability {existence} outside [0, 1]"
            )));
        }
        let dim = mean.len();
        if dim == 0 {
            return Err(GospaError::InvalidInput("component mean is empty".into()));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(GospaError::InvalidInput("component mean is not finite".into()));
        }
        if covariance.len() != dim || covariance.iter().any(|r| r.len() != dim) {
            return Err(GospaError::InvalidInput(format!(
                "covariance must be {dim}x{dim} to match the mean"
            )));
        }
        let factor = cholesky_factor(&covariance)
            .ok_or(GospaError::NotPositiveSemidefinite { component: 0 })?;
        Ok(Self {
            existence,
            mean,
            covariance,
            factor,
        })
    }

    /// Component with identity covariance.
    pub fn isotropic(existence: T, mean: Vec<T>) -> Result<Self> {
        let dim = mean.len();
        let identity = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::new(existence, mean, identity)
    }

    pub fn existence(&self) -> T {
        self.existence
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn covariance(&self) -> &[Vec<T>] {
        &self.covariance
    }

    pub fn dimension(&self) -> usize {
        self.mean.len()
    }

    /// One uniform draw for existence, then `N` standard normals if present.
    fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut Vec<T>) -> bool {
        let u: f64 = rng.random();
        if u >= self.existence.as_f64() {
            return false;
        }
        let n = self.dimension();
        let z: Vec<T> = (0..n)
            .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        out.clear();
        for i in 0..n {
            let mut v = self.mean[i];
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                v = v + self.factor[i * n + j] * *zj;
            }
            out.push(v);
        }
        true
    }
}

/// Cholesky factor of a symmetric PSD matrix, computed in `f64`.
///
/// An all-zero matrix yields the zero factor so degenerate components sample
/// their mean exactly.
fn cholesky_factor<T: Scalar>(covariance: &[Vec<T>]) -> Option<Vec<T>> {
    let n = covariance.len();
    let m = DMatrix::from_fn(n, n, |i, j| covariance[i][j].as_f64());
    if m.iter().any(|v| !v.is_finite()) {
        return None;
    }
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                return None;
            }
        }
    }
    if m.iter().all(|v| *v == 0.0) {
        return Some(vec![T::zero(); n * n]);
    }
    let lower = m
        .clone()
        .cholesky()
        .or_else(|| (m + DMatrix::identity(n, n) * CHOLESKY_JITTER).cholesky())?
        .l();
    Some((0..n * n).map(|k| T::of(lower[(k / n, k % n)])).collect())
}

/// Union of independent Bernoulli components sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBernoulli<T> {
    components: Vec<BernoulliComponent<T>>,
}

impl<T: Scalar> MultiBernoulli<T> {
    pub fn new(components: Vec<BernoulliComponent<T>>) -> Result<Self> {
        if let Some(first) = components.first() {
            if let Some(bad) = components
                .iter()
                .find(|c| c.dimension() != first.dimension())
            {
                return Err(GospaError::DimensionMismatch {
                    expected: first.dimension(),
                    found: bad.dimension(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[BernoulliComponent<T>] {
        &self.components
    }

    /// 0 for a model without components.
    pub fn dimension(&self) -> usize {
        self.components.first().map_or(0, BernoulliComponent::dimension)
    }

    pub fn sample(&self, seed: u64) -> TargetSet<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = TargetSet::empty(self.dimension());
        let mut point = Vec::with_capacity(self.dimension());
        for component in &self.components {
            if component.sample_into(&mut rng, &mut point) {
                set.push(&point).expect("component samples are finite and share a dimension");
            }
        }
        set
    }
}

/// Draws one realization of `model`; fully determined by `seed`.
pub fn sample_multi_bernoulli<T: Scalar>(model: &MultiBernoulli<T>, seed: u64) -> TargetSet<T> {
    model.sample(seed)
}

pub type JointSampler<T> = dyn Fn(u64) -> Result<(TargetSet<T>, TargetSet<T>)> + Send + Sync;

/// Source of (truth, estimate) realizations.
#[derive(Clone)]
pub enum PairSampler<T> {
    IndependentPair {
        truth: MultiBernoulli<T>,
        estimate: MultiBernoulli<T>,
    },
    CustomJoint(Arc<JointSampler<T>>),
}

impl<T: Scalar> PairSampler<T> {
    pub fn independent(truth: MultiBernoulli<T>, estimate: MultiBernoulli<T>) -> Self {
        Self::IndependentPair { truth, estimate }
    }

    pub fn custom(
        f: impl Fn(u64) -> Result<(TargetSet<T>, TargetSet<T>)> + Send + Sync + 'static,
    ) -> Self {
        Self::CustomJoint(Arc::new(f))
    }

    pub fn sample(&self, seed: u64) -> Result<(TargetSet<T>, TargetSet<T>)> {
        match self {
            Self::IndependentPair { truth, estimate } => {
                let x = truth.sample(derive_seed(seed, 0));
                let y = estimate.sample(derive_seed(seed, 1));
                if !x.is_empty() && !y.is_empty() && x.dimension() != y.dimension() {
                    return Err(GospaError::DimensionMismatch {
                        expected: x.dimension(),
                        found: y.dimension(),
                    });
                }
                Ok((x, y))
            }
            Self::CustomJoint(f) => f(seed),
        }
    }
}

impl<T> std::fmt::Debug for PairSampler<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::IndependentPair { .. } => f.write_str("IndependentPair { .. }"),
            Self::CustomJoint(_) => f.write_str("CustomJoint(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricVariant {
    /// GOSPA with the configured alpha.
    Gospa,
    Ospa,
    /// GOSPA with alpha = 1.
    #[value(name = "uospa")]
    #[serde(rename = "uospa")]
    UnnormalizedOspa,
}

impl MetricVariant {
    pub const ALL: [Self; 3] = [Self::Gospa, Self::Ospa, Self::UnnormalizedOspa];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gospa => "gospa",
            Self::Ospa => "ospa",
            Self::UnnormalizedOspa => "uospa",
        }
    }

    /// Distance between two realized sets.
    pub fn evaluate<T: Scalar>(
        self,
        x: &TargetSet<T>,
        y: &TargetSet<T>,
        params: &GospaParams<T>,
    ) -> Result<T> {
        match self {
            Self::Gospa => Ok(gospa(x, y, params)?.total),
            Self::Ospa => ospa_with_base(x, y, params.c(), params.p(), params.base()),
            Self::UnnormalizedOspa => unnormalized_ospa(x, y, params.c(), params.p(), params.base()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig<T> {
    pub p_prime: T,
    pub samples: usize,
    pub master_seed: u64,
}

impl<T: Scalar> EstimatorConfig<T> {
    pub fn new(p_prime: T, samples: usize, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            p_prime,
            samples,
            master_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(GospaError::InvalidParams("samples must be >= 1".into()));
        }
        if !(self.p_prime.is_finite() && self.p_prime >= T::one()) {
            return Err(GospaError::InvalidParams(format!(
                "outer exponent p' must lie in [1, inf), got {}",
                self.p_prime
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricEstimate<T> {
    pub value: T,
    /// Delta-method standard error of `value`.
    pub standard_error: T,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Uses the ambient rayon pool.
    #[default]
    Parallel,
}

/// Monte Carlo estimate of `E[d(X, Y)^p']^(1/p')`, evaluated in parallel.
pub fn estimate_metric<T: Scalar>(
    sampler: &PairSampler<T>,
    params: &GospaParams<T>,
    cfg: &EstimatorConfig<T>,
    variant: MetricVariant,
) -> Result<MetricEstimate<T>> {
    estimate_metric_with(sampler, params, cfg, variant, Execution::Parallel)
}

pub fn estimate_metric_with<T: Scalar>(
    sampler: &PairSampler<T>,
    params: &GospaParams<T>,
    cfg: &EstimatorConfig<T>,
    variant: MetricVariant,
    execution: Execution,
) -> Result<MetricEstimate<T>> {
    params.validate()?;
    cfg.validate()?;
    let one_sample = |k: usize| -> Result<T> {
        let (x, y) = sampler.sample(derive_seed(cfg.master_seed, k as u64))?;
        variant.evaluate(&x, &y, params)
    };
    let distances: Vec<T> = match execution {
        Execution::Serial => (0..cfg.samples).map(one_sample).collect::<Result<_>>()?,
        Execution::Parallel => (0..cfg.samples)
            .into_par_iter()
            .map(one_sample)
            .collect::<Result<_>>()?,
    };
    Ok(summarize(&distances, cfg.p_prime))
}

/// Fixed-order reduction of per-sample distances.
fn summarize<T: Scalar>(distances: &[T], p_prime: T) -> MetricEstimate<T> {
    let k = distances.len();
    let first = distances[0];
    if distances.iter().all(|d| *d == first) {
        return MetricEstimate {
            value: first,
            standard_error: T::zero(),
            samples: k,
        };
    }
    let moments: Vec<T> = distances.iter().map(|d| d.powf(p_prime)).collect();
    // Shift by the first moment to limit cancellation.
    let shift = moments[0];
    let count = T::of_usize(k);
    let mean_dev = moments.iter().map(|m| *m - shift).sum::<T>() / count;
    let mean = shift + mean_dev;
    let variance = if k > 1 {
        moments
            .iter()
            .map(|m| {
                let e = *m - shift - mean_dev;
                e * e
            })
            .sum::<T>()
            / T::of_usize(k - 1)
    } else {
        T::zero()
    };
    let se_mean = (variance / count).sqrt();
    let value = mean.powf(p_prime.recip());
    let standard_error = if mean > T::zero() {
        se_mean * mean.powf(p_prime.recip() - T::one()) / p_prime
    } else {
        T::zero()
    };
    MetricEstimate {
        value,
        standard_error,
        samples: k,
    }
}

/// Cut-off used in the missed/false target scenario grid.
pub const TABLE1_CUTOFF: f64 = 8.0;
pub const TABLE1_MISSED: [usize; 3] = [0, 1, 2];
pub const TABLE1_FALSE: [usize; 4] = [0, 1, 3, 10];
pub const TABLE1_EXPONENTS: [u32; 2] = [1, 2];

const TRUTH_MEANS: [[f64; 2]; 2] = [[-6.0, -6.0], [0.0, 3.0]];
const DETECTION_MEANS: [[f64; 2]; 2] = [[-6.7, -5.1], [-1.8, 2.9]];
const FALSE_COMPONENTS: usize = 10;

/// Mean of the `k`-th false-target component (`k` from 1).
pub fn false_component_mean(k: usize) -> [f64; 2] {
    [20.0 * k as f64, 20.0]
}

/// Truth with two always-present targets; estimate with two detection
/// components (the second, then the first, switched off as misses grow) and
/// ten far-away false-target components of which the first `n_false` exist.
pub fn table1_scenario<T: Scalar>(n_missed: usize, n_false: usize) -> Result<PairSampler<T>> {
    if n_missed > 2 {
        return Err(GospaError::InvalidInput(format!(
            "missed targets must be 0, 1 or 2, got {n_missed}"
        )));
    }
    if n_false > FALSE_COMPONENTS {
        return Err(GospaError::InvalidInput(format!(
            "at most {FALSE_COMPONENTS} false targets, got {n_false}"
        )));
    }
    let point = |m: [f64; 2]| vec![T::of(m[0]), T::of(m[1])];
    let flag = |on: bool| if on { T::one() } else { T::zero() };

    let truth = MultiBernoulli::new(
        TRUTH_MEANS
            .iter()
            .map(|m| BernoulliComponent::isotropic(T::one(), point(*m)))
            .collect::<Result<_>>()?,
    )?;

    let detected = 2 - n_missed;
    let mut estimate = Vec::with_capacity(2 + FALSE_COMPONENTS);
    for (i, m) in DETECTION_MEANS.iter().enumerate() {
        estimate.push(BernoulliComponent::isotropic(flag(i < detected), point(*m))?);
    }
    for k in 1..=FALSE_COMPONENTS {
        estimate.push(BernoulliComponent::isotropic(
            flag(k <= n_false),
            point(false_component_mean(k)),
        )?);
    }
    Ok(PairSampler::independent(truth, MultiBernoulli::new(estimate)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Cell<T> {
    /// `p' = p`.
    pub exponent: u32,
    pub metric: MetricVariant,
    pub n_missed: usize,
    pub n_false: usize,
    pub estimate: MetricEstimate<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1<T> {
    pub cutoff: T,
    pub samples: usize,
    pub master_seed: u64,
    pub cells: Vec<Table1Cell<T>>,
}

impl<T: Scalar> Table1<T> {
    pub fn get(
        &self,
        exponent: u32,
        metric: MetricVariant,
        n_missed: usize,
        n_false: usize,
    ) -> Option<&Table1Cell<T>> {
        self.cells.iter().find(|c| {
            c.exponent == exponent && c.metric == metric && c.n_missed == n_missed && c.n_false == n_false
        })
    }

    pub fn value(&self, exponent: u32, metric: MetricVariant, n_missed: usize, n_false: usize) -> T {
        self.get(exponent, metric, n_missed, n_false)
            .map(|c| c.estimate.value)
            .expect("cell is part of the grid")
    }
}

/// Every scenario of the grid for GOSPA (alpha = 2), OSPA and unnormalized
/// OSPA at `p' = p` in {1, 2}, `c = 8`, Euclidean base metric.
///
/// All cells share `master_seed`, so scenarios see common random numbers.
pub fn run_table1<T: Scalar>(
    samples: usize,
    master_seed: u64,
    execution: Execution,
) -> Result<Table1<T>> {
    let c = T::of(TABLE1_CUTOFF);
    let mut cells = Vec::new();
    for exponent in TABLE1_EXPONENTS {
        let p = T::of(exponent as f64);
        let params = GospaParams::new(c, T::of(2.0), p)?;
        let cfg = EstimatorConfig::new(p, samples, master_seed)?;
        for metric in MetricVariant::ALL {
            for n_false in TABLE1_FALSE {
                for n_missed in TABLE1_MISSED {
                    let sampler = table1_scenario(n_missed, n_false)?;
                    let estimate = estimate_metric_with(&sampler, &params, &cfg, metric, execution)?;
                    cells.push(Table1Cell {
                        exponent,
                        metric,
                        n_missed,
                        n_false,
                        estimate,
                    });
                }
            }
        }
    }
    Ok(Table1 {
        cutoff: c,
        samples,
        master_seed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate(existence: f64, mean: Vec<f64>) -> BernoulliComponent<f64> {
        let n = mean.len();
        BernoulliComponent::new(existence, mean, vec![vec![0.0; n]; n]).unwrap()
    }

    #[test]
    fn absent_component_never_contributes() {
        let model = MultiBernoulli::new(vec![degenerate(0.0, vec![1.0, 2.0])]).unwrap();
        for seed in 0..200 {
            assert!(model.sample(seed).is_empty());
        }
    }

    #[test]
    fn certain_zero_variance_component_returns_its_mean() {
        let model = MultiBernoulli::new(vec![degenerate(1.0, vec![1.5, -2.25])]).unwrap();
        for seed in 0..200 {
            let s = sample_multi_bernoulli(&model, seed);
            assert_eq!(s.to_points(), vec![vec![1.5, -2.25]]);
        }
    }

    #[test]
    fn inclusion_rate_matches_existence() {
        let model = MultiBernoulli::new(vec![BernoulliComponent::isotropic(0.5, vec![0.0]).unwrap()]).unwrap();
        let hits = (0..10_000u64)
            .filter(|s| !model.sample(derive_seed(99, *s)).is_empty())
            .count();
        let rate = hits as f64 / 10_000.0;
        // 3 sigma of Binomial(10000, 0.5) / 10000.
        assert!((rate - 0.5).abs() <= 0.015, "rate {rate}");
    }

    #[test]
    fn gaussian_moments() {
        let cov = vec![vec![4.0, 1.2], vec![1.2, 1.0]];
        let model = MultiBernoulli::new(vec![BernoulliComponent::new(1.0, vec![3.0, -1.0], cov).unwrap()])
            .unwrap();
        let n = 20_000;
        let pts: Vec<Vec<f64>> = (0..n).map(|s| model.sample(s).point(0).to_vec()).collect();
        let mean0 = pts.iter().map(|p| p[0]).sum::<f64>() / n as f64;
        let mean1 = pts.iter().map(|p| p[1]).sum::<f64>() / n as f64;
        let var0 = pts.iter().map(|p| (p[0] - mean0).powi(2)).sum::<f64>() / n as f64;
        let cov01 = pts.iter().map(|p| (p[0] - mean0) * (p[1] - mean1)).sum::<f64>() / n as f64;
        assert!((mean0 - 3.0).abs() < 0.06);
        assert!((mean1 + 1.0).abs() < 0.03);
        assert!((var0 - 4.0).abs() < 0.15);
        assert!((cov01 - 1.2).abs() < 0.08);
    }

    #[test]
    fn semidefinite_covariance_is_accepted_with_jitter() {
        let rank_one = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(BernoulliComponent::new(1.0, vec![0.0, 0.0], rank_one).is_ok());
    }

    #[test]
    fn rejects_bad_components() {
        let indefinite = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert_eq!(
            BernoulliComponent::new(1.0, vec![0.0, 0.0], indefinite),
            Err(GospaError::NotPositiveSemidefinite { component: 0 })
        );
        let asymmetric = vec![vec![1.0, 0.5], vec![0.0, 1.0]];
        assert!(BernoulliComponent::new(1.0, vec![0.0, 0.0], asymmetric).is_err());
        assert!(BernoulliComponent::isotropic(1.5, vec![0.0]).is_err());
        assert!(BernoulliComponent::isotropic(-0.1, vec![0.0]).is_err());
        assert!(BernoulliComponent::new(1.0, vec![0.0, 0.0], vec![vec![1.0]]).is_err());
        let mixed = vec![
            BernoulliComponent::isotropic(1.0, vec![0.0]).unwrap(),
            BernoulliComponent::isotropic(1.0, vec![0.0, 0.0]).unwrap(),
        ];
        assert!(MultiBernoulli::new(mixed).is_err());
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
        let seeds: std::collections::HashSet<_> = (0..1000).map(|k| derive_seed(7, k)).collect();
        assert_eq!(seeds.len(), 1000);
        // First SplitMix64 output for state 0.
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn estimator_config_validation() {
        assert!(EstimatorConfig::new(1.0, 0, 1).is_err());
        assert!(EstimatorConfig::new(0.5, 10, 1).is_err());
        assert!(EstimatorConfig::new(f64::INFINITY, 10, 1).is_err());
        assert!(EstimatorConfig::new(2.0, 10, 1).is_ok());
    }

    #[test]
    fn summary_of_constant_samples_is_exact() {
        let e = summarize(&[0.1_f64; 1000], 2.0);
        assert_eq!(e.value, 0.1);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn summary_matches_direct_formula() {
        let d = [1.0_f64, 2.0, 4.0, 5.0];
        let e = summarize(&d, 2.0);
        let m: f64 = d.iter().map(|v| v * v).sum::<f64>() / 4.0;
        let var: f64 = d.iter().map(|v| (v * v - m).powi(2)).sum::<f64>() / 3.0;
        assert!((e.value - m.sqrt()).abs() < 1e-12);
        let se = (var / 4.0).sqrt() * 0.5 / m.sqrt();
        assert!((e.standard_error - se).abs() < 1e-12);
    }

    #[test]
    fn scenario_cardinalities() {
        for seed in 0..50 {
            let (x, y) = table1_scenario::<f64>(2, 0).unwrap().sample(seed).unwrap();
            assert_eq!((x.len(), y.len()), (2, 0));
            let (_, y) = table1_scenario::<f64>(0, 0).unwrap().sample(seed).unwrap();
            assert_eq!(y.len(), 2);
            let (_, y) = table1_scenario::<f64>(1, 3).unwrap().sample(seed).unwrap();
            assert_eq!(y.len(), 4);
        }
        assert!(table1_scenario::<f64>(3, 0).is_err());
        assert!(table1_scenario::<f64>(0, 11).is_err());
    }

    #[test]
    fn scenario_estimate_models() {
        let PairSampler::IndependentPair { truth, estimate } = table1_scenario::<f64>(2, 0).unwrap() else {
            unreachable!()
        };
        assert!(estimate.components().iter().all(|c| c.existence() == 0.0));
        assert!(truth.components().iter().all(|c| c.existence() == 1.0));
        let PairSampler::IndependentPair { estimate, .. } = table1_scenario::<f64>(1, 3).unwrap() else {
            unreachable!()
        };
        let ex: Vec<f64> = estimate.components().iter().map(|c| c.existence()).collect();
        assert_eq!(ex, [1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn false_components_are_far_from_detections_and_truth() {
        let c = TABLE1_CUTOFF;
        for k in 1..=FALSE_COMPONENTS {
            let f = false_component_mean(k);
            for m in TRUTH_MEANS.iter().chain(DETECTION_MEANS.iter()) {
                let d = ((f[0] - m[0]).powi(2) + (f[1] - m[1]).powi(2)).sqrt();
                assert!(d > 2.0 * c, "false component {k} at {d}");
            }
        }
    }

    #[test]
    fn custom_joint_sampler() {
        let sampler = PairSampler::custom(|seed| {
            let v = (seed % 7) as f64;
            Ok((
                TargetSet::from_points(&[vec![0.0]])?,
                TargetSet::from_points(&[vec![v]])?,
            ))
        });
        let params = GospaParams::new(100.0, 2.0, 1.0).unwrap();
        let cfg = EstimatorConfig::new(1.0, 2000, 3).unwrap();
        let est = estimate_metric(&sampler, &params, &cfg, MetricVariant::Gospa).unwrap();
        assert!((est.value - 3.0).abs() < 0.2, "{est:?}");
        assert!(est.standard_error > 0.0);
    }
}
