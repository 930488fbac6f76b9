//! Log-space special functions and compensated series evaluation.
//!
//! Everything here returns natural logarithms. Conversion to bits happens in
//! the bound modules, once, through [`nats_to_bits`].

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Exact factorials 0! ..= 20! (20! is the largest that fits in a u64).
const FACTORIALS: [u64; 21] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5_040,
    40_320,
    362_880,
    3_628_800,
    39_916_800,
    479_001_600,
    6_227_020_800,
    87_178_291_200,
    1_307_674_368_000,
    20_922_789_888_000,
    355_687_428_096_000,
    6_402_373_705_728_000,
    121_645_100_408_832_000,
    2_432_902_008_176_640_000,
];

/// ln(sqrt(2*pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest n for which [`log_binomial`] goes through exact integer arithmetic.
pub const EXACT_BINOMIAL_MAX_N: usize = 30;

#[inline]
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

/// Natural log of `n!`.
///
/// Values up to 20! come from an exact table. Larger arguments use the
/// Stirling series for ln Γ(n + 1), truncated after the x^-11 term; at
/// x ≥ 22 the first omitted term is below 1e-17 relative.
pub fn log_factorial(n: usize) -> f64 {
    if n < FACTORIALS.len() {
        return (FACTORIALS[n] as f64).ln();
    }
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k (2k-1) x^(2k-1)), Horner form in 1/x^2.
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360_360.0))))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

fn exact_binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    // Each intermediate product is itself a binomial coefficient, so the
    // division is exact and nothing overflows for n <= 30.
    (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j as u64 + 1))
}

/// Natural log of the binomial coefficient C(n, k).
pub fn log_binomial(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("binomial C({n}, {k}) requires k <= n")));
    }
    if n <= EXACT_BINOMIAL_MAX_N {
        return Ok((exact_binomial(n, k) as f64).ln());
    }
    let k = k.min(n - k);
    Ok(log_factorial(n) - log_factorial(k) - log_factorial(n - k))
}

/// A probability (or other nonnegative weight) carried as its natural log.
///
/// Zero weight is represented by negative infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight(f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    pub const ONE: LogWeight = LogWeight(0.0);

    /// Wraps a natural-log value. Rejects NaN and +∞, which have no finite weight.
    pub fn from_ln(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::Domain(format!("log weight {value} has no finite weight")));
        }
        Ok(LogWeight(value))
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn weight(self) -> f64 {
        self.0.exp()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} is outside [0, 1]")));
    }
    Ok(())
}

/// ln of C(n, i) p^i (1 - p)^(n - i).
///
/// The degenerate laws p = 0 and p = 1 are handled explicitly so that no
/// `0 * ln 0` ever appears.
pub fn binomial_pmf_log(n: usize, i: usize, p: f64) -> Result<LogWeight> {
    check_probability(p)?;
    if i > n {
        return Err(Error::Domain(format!("binomial pmf needs i <= n, got i={i}, n={n}")));
    }
    if p == 0.0 {
        return Ok(if i == 0 { LogWeight::ONE } else { LogWeight::ZERO });
    }
    if p == 1.0 {
        return Ok(if i == n { LogWeight::ONE } else { LogWeight::ZERO });
    }
    let ln = log_binomial(n, i)? + i as f64 * p.ln() + (n - i) as f64 * (-p).ln_1p();
    Ok(LogWeight(ln))
}

/// ln of γ^i e^(-γ) / i!.
pub fn poisson_pmf_log(gamma: f64, i: usize) -> Result<LogWeight> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidGamma(gamma));
    }
    Ok(LogWeight(i as f64 * gamma.ln() - gamma - log_factorial(i)))
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Truncation policy for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// A term is negligible when `|term| <= rel_tol * |partial sum|`.
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Number of consecutive negligible terms required before stopping.
    pub stability_window: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { rel_tol: 1e-15, max_terms: 1_000_000, stability_window: 5 }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Domain(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if self.max_terms == 0 || self.stability_window == 0 {
            return Err(Error::Domain(
                "max_terms and stability_window must both be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of [`truncated_series_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
}

/// First index at which a Poisson(γ)-weighted series may stop: the smallest
/// integer strictly greater than 2γ + 50.
pub fn poisson_stop_index(gamma: f64) -> usize {
    (2.0 * gamma + 50.0).floor() as usize + 1
}

/// Sums `term(0) + term(1) + ...` with compensated summation.
///
/// Stops once `stability_window` consecutive terms at indices `>= min_index`
/// are negligible relative to the running sum. Fails with
/// [`Error::SeriesNotConverged`] if `max_terms` terms are consumed first.
pub fn truncated_series_sum<F>(mut term: F, ctrl: &SeriesControl, min_index: usize) -> Result<SeriesSum>
where
    F: FnMut(usize) -> f64,
{
    ctrl.validate()?;
    let mut acc = CompensatedSum::new();
    let mut quiet = 0usize;
    for i in 0..ctrl.max_terms {
        let t = term(i);
        if t.is_nan() {
            return Err(Error::Domain(format!("series term {i} is NaN")));
        }
        acc.add(t);
        if i >= min_index && t.abs() <= ctrl.rel_tol * acc.value().abs() {
            quiet += 1;
            if quiet >= ctrl.stability_window {
                return Ok(SeriesSum { value: acc.value(), terms: i + 1 });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::SeriesNotConverged { terms: ctrl.max_terms, partial: acc.value() })
}

/// Sums `ln_weight(i).weight() * value(i)` for a Poisson(γ) weight, using the
/// Poisson stop index.
pub fn poisson_weighted_sum<F>(gamma: f64, ctrl: &SeriesControl, mut value: F) -> Result<SeriesSum>
where
    F: FnMut(usize) -> f64,
{
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidGamma(gamma));
    }
    let ln_gamma = gamma.ln();
    truncated_series_sum(
        |i| {
            let w = (i as f64 * ln_gamma - gamma - log_factorial(i)).exp();
            if w == 0.0 {
                0.0
            } else {
                w * value(i)
            }
        },
        ctrl,
        poisson_stop_index(gamma),
    )
}
