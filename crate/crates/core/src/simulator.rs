//! Seeded Monte Carlo sampling of the adder channel.
//!
//! Work is split into `streams` independent substreams. Stream `k` draws from
//! ChaCha8 seeded with `seed` on stream id `k`, so results depend only on
//! `(seed, streams)` and never on thread scheduling. Per-stream accumulators
//! are merged in stream order.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelConfig, InputDistribution};
use crate::oracle::composition_count;

/// Largest output support for which [`estimate_entropy`] histograms outputs.
pub const ENTROPY_SUPPORT_GUARD: u128 = 100_000;

/// Jackknife block count for entropy standard errors.
pub const JACKKNIFE_BLOCKS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub cfg: ChannelConfig,
    pub dist: InputDistribution,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
}

impl SimulationConfig {
    pub fn new(cfg: ChannelConfig, dist: InputDistribution, samples: usize, seed: u64, streams: usize) -> Result<Self> {
        dist.check_against(&cfg)?;
        if samples == 0 {
            return Err(Error::SimulatorRefusal("sample count must be at least 1".into()));
        }
        if streams == 0 {
            return Err(Error::SimulatorRefusal("stream count must be at least 1".into()));
        }
        Ok(SimulationConfig { cfg, dist, samples, seed, streams })
    }

    /// Samples assigned to each stream; the first `samples % streams` streams
    /// take one extra.
    pub fn quotas(&self) -> Vec<usize> {
        let base = self.samples / self.streams;
        let extra = self.samples % self.streams;
        (0..self.streams).map(|k| base + usize::from(k < extra)).collect()
    }

    fn stream_rng(&self, stream: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream as u64);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    PlugIn,
    MillerMadow,
    PointwiseMi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples_used: usize,
    pub estimator: Estimator,
}

/// Draws user frequency choices from a fixed input law.
#[derive(Debug, Clone)]
pub struct FrequencySampler {
    alias: WeightedAliasIndex<f64>,
}

impl FrequencySampler {
    pub fn new(dist: &InputDistribution) -> Result<Self> {
        let alias = WeightedAliasIndex::new(dist.probabilities().to_vec())
            .map_err(|e| Error::InvalidDistribution(format!("cannot build sampler: {e}")))?;
        Ok(FrequencySampler { alias })
    }

    #[inline]
    pub fn frequency<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.alias.sample(rng)
    }

    /// Fills `y` with the histogram of `users` independent choices.
    pub fn histogram_into<R: Rng + ?Sized>(&self, rng: &mut R, users: usize, y: &mut [u32]) {
        y.iter_mut().for_each(|v| *v = 0);
        for _ in 0..users {
            y[self.frequency(rng)] += 1;
        }
    }
}

/// One channel output: the histogram of S independent frequency choices.
pub fn sample_output<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    dist: &InputDistribution,
    rng: &mut R,
) -> Result<Vec<usize>> {
    dist.check_against(cfg)?;
    let sampler = FrequencySampler::new(dist)?;
    let mut y = vec![0u32; cfg.q()];
    sampler.histogram_into(rng, cfg.s(), &mut y);
    debug_assert_eq!(y.iter().map(|&v| v as usize).sum::<usize>(), cfg.s());
    Ok(y.into_iter().map(|v| v as usize).collect())
}

type Histogram = HashMap<Vec<u32>, u64>;

/// Σ c ln c over a histogram, and its support size.
fn count_entropy_terms<I: Iterator<Item = u64>>(counts: I) -> (f64, usize) {
    let mut acc = 0.0;
    let mut support = 0;
    for c in counts.filter(|&c| c > 0) {
        acc += c as f64 * (c as f64).ln();
        support += 1;
    }
    (acc, support)
}

fn histogram_entropy_bits(n: u64, sum_clnc: f64, support: usize, estimator: Estimator) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n_f = n as f64;
    let plug_in = ((n_f.ln() - sum_clnc / n_f) / LN_2).max(0.0);
    match estimator {
        Estimator::MillerMadow => plug_in + (support.saturating_sub(1)) as f64 / (2.0 * n_f * LN_2),
        _ => plug_in,
    }
}

/// Output entropy from an empirical histogram of simulated outputs.
///
/// `estimator` selects plain plug-in or Miller–Madow. The standard error is a
/// leave-one-block-out jackknife over [`JACKKNIFE_BLOCKS`] contiguous blocks
/// of the global sample sequence.
pub fn estimate_entropy(sim: &SimulationConfig, estimator: Estimator) -> Result<SimulationEstimate> {
    if estimator == Estimator::PointwiseMi {
        return Err(Error::SimulatorRefusal("pointwise-mi is not an entropy estimator".into()));
    }
    let (q, s) = (sim.cfg.q(), sim.cfg.s());
    match composition_count(q, s) {
        Some(c) if c <= ENTROPY_SUPPORT_GUARD => {}
        _ => {
            return Err(Error::SimulatorRefusal(format!(
                "output support C(S+Q-1, S) for Q={q}, S={s} exceeds {ENTROPY_SUPPORT_GUARD}"
            )))
        }
    }
    let sampler = FrequencySampler::new(&sim.dist)?;
    let n = sim.samples;
    let blocks = JACKKNIFE_BLOCKS.min(n);
    let quotas = sim.quotas();
    let offsets: Vec<usize> = quotas.iter().scan(0, |acc, &k| {
        let o = *acc;
        *acc += k;
        Some(o)
    }).collect();

    let per_stream: Vec<Vec<Histogram>> = (0..sim.streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = sim.stream_rng(k);
            let mut hist: Vec<Histogram> = vec![HashMap::new(); blocks];
            let mut y = vec![0u32; q];
            for local in 0..quotas[k] {
                sampler.histogram_into(&mut rng, s, &mut y);
                let block = (offsets[k] + local) * blocks / n;
                *hist[block].entry(y.clone()).or_insert(0) += 1;
            }
            hist
        })
        .collect();

    let mut by_block: Vec<Histogram> = vec![HashMap::new(); blocks];
    for stream in per_stream {
        for (b, h) in stream.into_iter().enumerate() {
            for (y, c) in h {
                *by_block[b].entry(y).or_insert(0) += c;
            }
        }
    }
    let mut total: Histogram = HashMap::new();
    for h in &by_block {
        for (y, &c) in h {
            *total.entry(y.clone()).or_insert(0) += c;
        }
    }
    // Sorted keys give a summation order independent of hash seeds.
    let mut keys: Vec<&Vec<u32>> = total.keys().collect();
    keys.sort();

    let n_total = n as u64;
    let (sum_all, support_all) = count_entropy_terms(keys.iter().map(|k| total[*k]));
    let estimate = histogram_entropy_bits(n_total, sum_all, support_all, estimator);

    let std_error = if blocks < 2 {
        0.0
    } else {
        let replicates: Vec<f64> = by_block
            .iter()
            .map(|h| {
                let n_b: u64 = h.values().sum();
                let (sum, support) =
                    count_entropy_terms(keys.iter().map(|k| total[*k] - h.get(*k).copied().unwrap_or(0)));
                histogram_entropy_bits(n_total - n_b, sum, support, estimator)
            })
            .collect();
        let b = blocks as f64;
        let mean = replicates.iter().sum::<f64>() / b;
        let ss: f64 = replicates.iter().map(|r| (r - mean).powi(2)).sum();
        ((b - 1.0) / b * ss).sqrt()
    };

    Ok(SimulationEstimate { estimate, std_error, samples_used: n, estimator })
}

/// Running mean and second central moment.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }
}

/// Monte Carlo I(X₁; Y) as the sample mean of log₂(y_{X₁} / (S p_{X₁})).
///
/// That ratio is exactly p(y | x₁) / p(y), so the average is an unbiased
/// estimate of the mutual information with no density estimation. Refuses
/// laws with any zero-probability frequency.
pub fn estimate_mi(sim: &SimulationConfig) -> Result<SimulationEstimate> {
    let p = sim.dist.probabilities();
    if let Some(j) = p.iter().position(|&pj| pj == 0.0) {
        return Err(Error::SimulatorRefusal(format!(
            "frequency {} has zero probability; the likelihood ratio needs every p_j > 0",
            j + 1
        )));
    }
    let sampler = FrequencySampler::new(&sim.dist)?;
    let s = sim.cfg.s();
    let log_scale: Vec<f64> = p.iter().map(|&pj| (s as f64 * pj).ln()).collect();
    let quotas = sim.quotas();

    let per_stream: Vec<Moments> = (0..sim.streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = sim.stream_rng(k);
            let mut m = Moments::default();
            for _ in 0..quotas[k] {
                let x1 = sampler.frequency(&mut rng);
                // Only y_{x1} enters the ratio; the other users' bins are not kept.
                let mut y_x1 = 1u32;
                for _ in 1..s {
                    if sampler.frequency(&mut rng) == x1 {
                        y_x1 += 1;
                    }
                }
                m.push(((y_x1 as f64).ln() - log_scale[x1]) / LN_2);
            }
            m
        })
        .collect();

    let m = per_stream.into_iter().fold(Moments::default(), Moments::merge);
    let var = if m.n > 1 { m.m2 / (m.n - 1) as f64 } else { 0.0 };
    Ok(SimulationEstimate {
        estimate: m.mean,
        std_error: (var.max(0.0) / m.n as f64).sqrt(),
        samples_used: sim.samples,
        estimator: Estimator::PointwiseMi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(q: usize, s: usize, n: usize, seed: u64, streams: usize) -> SimulationConfig {
        let cfg = ChannelConfig::new(q, s).unwrap();
        SimulationConfig::new(cfg, InputDistribution::uniform(q).unwrap(), n, seed, streams).unwrap()
    }

    #[test]
    fn quotas_cover_samples() {
        let sc = sim(2, 2, 103, 1, 4);
        assert_eq!(sc.quotas(), vec![26, 26, 26, 25]);
        assert_eq!(sc.quotas().iter().sum::<usize>(), 103);
    }

    #[test]
    fn config_validation() {
        let cfg = ChannelConfig::new(2, 2).unwrap();
        let d = InputDistribution::uniform(2).unwrap();
        assert!(SimulationConfig::new(cfg, d.clone(), 0, 1, 1).is_err());
        assert!(SimulationConfig::new(cfg, d, 10, 1, 0).is_err());
        let d3 = InputDistribution::uniform(3).unwrap();
        assert!(SimulationConfig::new(cfg, d3, 10, 1, 1).is_err());
    }

    #[test]
    fn single_frequency_output() {
        let cfg = ChannelConfig::new(1, 6).unwrap();
        let d = InputDistribution::uniform(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(sample_output(&cfg, &d, &mut rng).unwrap(), vec![6]);
        }
    }

    #[test]
    fn point_mass_output() {
        let cfg = ChannelConfig::new(4, 5).unwrap();
        let d = InputDistribution::point_mass(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(sample_output(&cfg, &d, &mut rng).unwrap(), vec![0, 0, 5, 0]);
        }
    }

    #[test]
    fn outputs_sum_to_s() {
        let cfg = ChannelConfig::new(7, 13).unwrap();
        let d = InputDistribution::new(vec![0.05, 0.1, 0.15, 0.2, 0.2, 0.2, 0.1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            assert_eq!(sample_output(&cfg, &d, &mut rng).unwrap().iter().sum::<usize>(), 13);
        }
    }

    #[test]
    fn deterministic_channel_estimates() {
        let e = estimate_entropy(&sim(1, 4, 1000, 9, 3), Estimator::MillerMadow).unwrap();
        assert_eq!((e.estimate, e.std_error), (0.0, 0.0));
        let m = estimate_mi(&sim(1, 4, 1000, 9, 3)).unwrap();
        assert_eq!((m.estimate, m.std_error), (0.0, 0.0));
        assert_eq!(m.samples_used, 1000);
    }

    #[test]
    fn determinism() {
        let a = estimate_mi(&sim(3, 5, 20_000, 42, 4)).unwrap();
        let b = estimate_mi(&sim(3, 5, 20_000, 42, 4)).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = estimate_entropy(&sim(3, 5, 20_000, 42, 4), Estimator::PlugIn).unwrap();
        let d = estimate_entropy(&sim(3, 5, 20_000, 42, 4), Estimator::PlugIn).unwrap();
        assert_eq!(c, d);
        let other = estimate_mi(&sim(3, 5, 20_000, 43, 4)).unwrap();
        assert_ne!(a.estimate, other.estimate);
    }

    #[test]
    fn refusals() {
        let big = sim(20, 20, 10, 1, 1);
        assert!(matches!(estimate_entropy(&big, Estimator::PlugIn), Err(Error::SimulatorRefusal(_))));
        let cfg = ChannelConfig::new(3, 3).unwrap();
        let d = InputDistribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        let sc = SimulationConfig::new(cfg, d, 10, 1, 1).unwrap();
        assert!(matches!(estimate_mi(&sc), Err(Error::SimulatorRefusal(_))));
        assert!(estimate_entropy(&sc, Estimator::PointwiseMi).is_err());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert_eq!(merged.n, whole.n);
        assert!((merged.mean - whole.mean).abs() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-12);
    }
}
