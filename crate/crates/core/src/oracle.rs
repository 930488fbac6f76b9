//! Brute-force enumeration of small channel instances.
//!
//! These routines walk every composition of S into Q parts and so never rely
//! on the marginal (single-frequency) reductions used by the analytic bounds.
//! They refuse instances above the enumeration cap instead of truncating.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{ChannelConfig, InputDistribution};
use crate::numerics::{binomial_pmf_log, log_factorial, nats_to_bits, CompensatedSum};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Number of compositions of `s` into `q` parts, C(s+q−1, s), or `None` on
/// u128 overflow.
pub fn composition_count(q: usize, s: usize) -> Option<u128> {
    if q == 0 {
        return None;
    }
    let n = (s + q - 1) as u128;
    let k = (q - 1).min(s) as u128;
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.checked_mul(n - j)? / (j + 1);
    }
    Some(acc)
}

fn check_cap(q: usize, s: usize, cap: u64) -> Result<()> {
    match composition_count(q, s) {
        Some(c) if c <= cap as u128 => Ok(()),
        Some(c) => Err(Error::EnumerationCap { states: c as f64, cap }),
        None => Err(Error::EnumerationCap { states: f64::INFINITY, cap }),
    }
}

/// All compositions of `s` into `q` parts, first component descending:
/// `(s,0,…,0), (s−1,1,0,…), …, (0,…,0,s)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Compositions {
    pub fn new(q: usize, s: usize) -> Self {
        if q == 0 {
            return Compositions { current: None };
        }
        let mut first = vec![0; q];
        first[0] = s;
        Compositions { current: Some(first) }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let q = out.len();
        if let Some(k) = (0..q.saturating_sub(1)).rev().find(|&k| out[k] > 0) {
            let mut succ = out.clone();
            let tail: usize = succ[k + 1..].iter().sum();
            succ[k] -= 1;
            succ[k + 1] = tail + 1;
            for y in &mut succ[k + 2..] {
                *y = 0;
            }
            self.current = Some(succ);
        }
        Some(out)
    }
}

/// ln of the multinomial probability of `y` under `p`, or `None` if `y` puts
/// users on a zero-probability frequency.
fn multinomial_ln(y: &[usize], p: &[f64]) -> Option<f64> {
    let s: usize = y.iter().sum();
    let mut ln = log_factorial(s);
    for (&yj, &pj) in y.iter().zip(p) {
        if yj == 0 {
            continue;
        }
        if pj == 0.0 {
            return None;
        }
        ln += yj as f64 * pj.ln() - log_factorial(yj);
    }
    Some(ln)
}

/// The exact output law of a channel instance.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDistribution {
    q: usize,
    s: usize,
    entries: Vec<(Vec<usize>, f64)>,
}

impl OutputDistribution {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Outputs with nonzero probability, in enumeration order.
    pub fn entries(&self) -> &[(Vec<usize>, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability(&self, y: &[usize]) -> f64 {
        self.entries.iter().find(|(k, _)| k.as_slice() == y).map_or(0.0, |(_, v)| *v)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, v)| *v).collect::<CompensatedSum>().value()
    }

    /// Point mass on a single output vector.
    pub fn deterministic(y: Vec<usize>) -> Self {
        let s = y.iter().sum();
        OutputDistribution { q: y.len(), s, entries: vec![(y, 1.0)] }
    }
}

fn output_law(q: usize, s: usize, p: &[f64]) -> OutputDistribution {
    let entries = Compositions::new(q, s)
        .filter_map(|y| multinomial_ln(&y, p).map(|ln| (y, ln.exp())))
        .filter(|(_, v)| *v > 0.0)
        .collect();
    OutputDistribution { q, s, entries }
}

pub fn enumerate_output_distribution(cfg: &ChannelConfig, dist: &InputDistribution) -> Result<OutputDistribution> {
    enumerate_output_distribution_with_cap(cfg, dist, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_output_distribution_with_cap(
    cfg: &ChannelConfig,
    dist: &InputDistribution,
    cap: u64,
) -> Result<OutputDistribution> {
    dist.check_against(cfg)?;
    check_cap(cfg.q(), cfg.s(), cap)?;
    Ok(output_law(cfg.q(), cfg.s(), dist.probabilities()))
}

/// Plug-in entropy −Σ p(y) log₂ p(y) of an exact law.
pub fn exact_entropy(out: &OutputDistribution) -> f64 {
    let nats = out
        .entries
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(_, v)| -v * v.ln())
        .collect::<CompensatedSum>()
        .value();
    nats_to_bits(nats).max(0.0)
}

/// I(X₁; Y) from the exact joint law of user 1's frequency and the output.
///
/// Given X₁ = j the output is `e_j + Y'`, with `Y'` the histogram of the
/// other S − 1 users; the unconditional law of Y is enumerated separately
/// and looked up, so no likelihood-ratio identity is assumed.
pub fn exact_single_user_mi(cfg: &ChannelConfig, dist: &InputDistribution) -> Result<f64> {
    dist.check_against(cfg)?;
    let (q, s) = (cfg.q(), cfg.s());
    check_cap(q, s, DEFAULT_ENUMERATION_CAP)?;
    let p = dist.probabilities();

    let marginal: HashMap<Vec<usize>, f64> = output_law(q, s, p).entries.into_iter().collect();
    let others = output_law(q, s - 1, p);

    let mut acc = CompensatedSum::new();
    for (j, &pj) in p.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        for (rest, cond) in &others.entries {
            let cond = *cond;
            let mut y = rest.clone();
            y[j] += 1;
            let py = marginal[&y];
            acc.add(pj * cond * (cond / py).ln());
        }
    }
    Ok(nats_to_bits(acc.value()).max(0.0))
}

/// Both sides of the multinomial marginalization identity
///
/// `Σ_{m₁+…+m_Q=S} (S; m) Π p_j^{m_j} f(m₁) = Σᵢ C(S,i) p₁ⁱ (1−p₁)^{S−i} f(i)`.
///
/// Returns `(full, marginal)`.
pub fn lemma1_check<F>(s: usize, dist: &InputDistribution, f: F) -> Result<(f64, f64)>
where
    F: Fn(usize) -> f64,
{
    let p = dist.probabilities();
    let q = p.len();
    check_cap(q, s, DEFAULT_ENUMERATION_CAP)?;

    let mut full = CompensatedSum::new();
    for m in Compositions::new(q, s) {
        if let Some(ln) = multinomial_ln(&m, p) {
            full.add(ln.exp() * f(m[0]));
        }
    }
    let mut marginal = CompensatedSum::new();
    for i in 0..=s {
        let w = binomial_pmf_log(s, i, p[0])?.weight();
        if w > 0.0 {
            marginal.add(w * f(i));
        }
    }
    Ok((full.value(), marginal.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: usize, s: usize) -> ChannelConfig {
        ChannelConfig::new(q, s).unwrap()
    }

    #[test]
    fn composition_order() {
        let all: Vec<_> = Compositions::new(3, 2).collect();
        assert_eq!(
            all,
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]
        );
        assert_eq!(Compositions::new(1, 5).collect::<Vec<_>>(), vec![vec![5]]);
        assert_eq!(Compositions::new(4, 0).collect::<Vec<_>>(), vec![vec![0; 4]]);
    }

    #[test]
    fn composition_counts() {
        for q in 1..6 {
            for s in 0..9 {
                let n = Compositions::new(q, s).count() as u128;
                assert_eq!(Some(n), composition_count(q, s), "q={q} s={s}");
            }
        }
        assert_eq!(composition_count(4, 6), Some(84));
    }

    #[test]
    fn two_by_two_law() {
        let out = enumerate_output_distribution(&cfg(2, 2), &InputDistribution::uniform(2).unwrap()).unwrap();
        let keys: Vec<_> = out.entries().iter().map(|(k, _)| k.clone()).collect();
        assert_eq!(keys, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!((out.probability(&[2, 0]) - 0.25).abs() < 1e-15);
        assert!((out.probability(&[1, 1]) - 0.5).abs() < 1e-15);
        assert!((out.probability(&[0, 2]) - 0.25).abs() < 1e-15);
        assert!((exact_entropy(&out) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn single_frequency_law() {
        let out = enumerate_output_distribution(&cfg(1, 5), &InputDistribution::uniform(1).unwrap()).unwrap();
        assert_eq!(out.entries(), &[(vec![5], 1.0)]);
        assert_eq!(exact_entropy(&out), 0.0);
        assert_eq!(exact_entropy(&OutputDistribution::deterministic(vec![0, 3, 0])), 0.0);
    }

    #[test]
    fn zero_probability_outputs_dropped() {
        let d = InputDistribution::new(vec![0.5, 0.0, 0.5]).unwrap();
        let out = enumerate_output_distribution(&cfg(3, 3), &d).unwrap();
        assert_eq!(out.len(), 4);
        assert!((out.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_refusal() {
        let d = InputDistribution::uniform(3).unwrap();
        assert!(enumerate_output_distribution_with_cap(&cfg(3, 4), &d, 15).is_ok());
        let e = enumerate_output_distribution_with_cap(&cfg(3, 4), &d, 14).unwrap_err();
        assert!(matches!(e, Error::EnumerationCap { cap: 14, .. }));
        let d = InputDistribution::uniform(40).unwrap();
        assert!(exact_single_user_mi(&cfg(40, 40), &d).is_err());
    }

    #[test]
    fn exact_mi_small_cases() {
        let u2 = InputDistribution::uniform(2).unwrap();
        assert!((exact_single_user_mi(&cfg(2, 2), &u2).unwrap() - 0.5).abs() < 1e-14);
        let d = InputDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let h: f64 = d.probabilities().iter().map(|p| -p * p.log2()).sum();
        assert!((exact_single_user_mi(&cfg(3, 1), &d).unwrap() - h).abs() < 1e-14);
    }

    #[test]
    fn lemma1_binary() {
        let d = InputDistribution::new(vec![0.3, 0.7]).unwrap();
        for s in 0..12 {
            let (a, b) = lemma1_check(s, &d, |i| (i as f64).sqrt() - 1.0).unwrap();
            assert!((a - b).abs() < 1e-14, "s={s}");
        }
    }

    #[test]
    fn lemma1_three_by_three_log_factorial() {
        let d = InputDistribution::uniform(3).unwrap();
        let (a, b) = lemma1_check(3, &d, |i| nats_to_bits(log_factorial(i))).unwrap();
        assert!((a - b).abs() < 1e-12);
        // P(m₁=2)·1 + P(m₁=3)·log₂6 with m₁ ~ Bin(3, 1/3).
        let expected = 3.0 * (1.0 / 9.0) * (2.0 / 3.0) + (1.0 / 27.0) * 6f64.log2();
        assert!((b - expected).abs() < 1e-14);
    }
}
