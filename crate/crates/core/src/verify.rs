//! Self-check suites: the marginalization identity, the binomial log-ratio
//! limit, and agreement between finite, asymptotic and enumerated values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coordinated::{coord_lower_asymptotic, coord_lower_finite};
use crate::error::Result;
use crate::model::{ChannelConfig, InputDistribution};
use crate::numerics::{log_factorial, nats_to_bits, SeriesControl};
use crate::oracle::{enumerate_output_distribution, exact_entropy, exact_single_user_mi, lemma1_check};
use crate::uncoordinated::{lemma2_sequence, single_user_mi, uc_sum_rate, uc_unif_asymptotic};

pub const LEMMA1_SEED: u64 = 0x5eed_0001;
pub const LEMMA1_CASES: usize = 200;
pub const LEMMA1_TOL: f64 = 1e-12;
pub const LEMMA2_PROBABILITIES: [f64; 4] = [0.1, 0.3, 0.5, 0.9];
pub const LEMMA2_REL_TOL: f64 = 0.05;
pub const CONSISTENCY_SEED: u64 = 0x5eed_0002;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const CONVERGENCE_TOL: f64 = 0.01;
pub const CONVERGENCE_GAMMAS: [f64; 3] = [0.5, 1.0, 2.0];
/// Frequency count for the uncoordinated finite-to-asymptotic check.
pub const UC_CONVERGENCE_Q: usize = 400;
/// Frequency count for the coordinated check. The coordinated gap decays
/// like log₂(2πS) / (2Q) and is still about 0.015 at Q = 400.
pub const COORD_CONVERGENCE_Q: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// Test functions for the marginalization identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    Log2Factorial,
    Identity,
    Square,
    Reciprocal,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] =
        [TestFunction::Log2Factorial, TestFunction::Identity, TestFunction::Square, TestFunction::Reciprocal];

    pub fn eval(self, i: usize) -> f64 {
        let x = i as f64;
        match self {
            TestFunction::Log2Factorial => nats_to_bits(log_factorial(i)),
            TestFunction::Identity => x,
            TestFunction::Square => x * x,
            TestFunction::Reciprocal => 1.0 / (x + 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Log2Factorial => "log2(i!)",
            TestFunction::Identity => "i",
            TestFunction::Square => "i^2",
            TestFunction::Reciprocal => "1/(i+1)",
        }
    }
}

/// A random law on `q` frequencies with every entry positive.
pub fn random_distribution<R: Rng>(rng: &mut R, q: usize) -> InputDistribution {
    loop {
        let w: Vec<f64> = (0..q).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        if let Ok(d) = InputDistribution::new(w.iter().map(|x| x / total).collect()) {
            return d;
        }
    }
}

/// One randomized instance of the marginalization identity.
#[derive(Debug, Clone)]
pub struct Lemma1Case {
    pub s: usize,
    pub dist: InputDistribution,
    pub function: TestFunction,
}

/// `count` reproducible cases with Q ≤ 5 and S ≤ 8, cycling through the
/// four test functions.
pub fn lemma1_cases(count: usize, seed: u64) -> Vec<Lemma1Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let q = rng.random_range(1..=5);
            let s = rng.random_range(1..=8);
            let dist = random_distribution(&mut rng, q);
            Lemma1Case { s, dist, function: TestFunction::ALL[k % 4] }
        })
        .collect()
}

pub fn lemma1_suite() -> Result<Vec<CheckResult>> {
    lemma1_cases(LEMMA1_CASES, LEMMA1_SEED)
        .into_iter()
        .enumerate()
        .map(|(k, case)| {
            let (full, marginal) = lemma1_check(case.s, &case.dist, |i| case.function.eval(i))?;
            let diff = (full - marginal).abs();
            Ok(CheckResult::new(
                format!("lemma1/{:03}", k + 1),
                diff < LEMMA1_TOL,
                format!(
                    "Q={} S={} f={} full={full:.15e} marginal={marginal:.15e} diff={diff:.3e}",
                    case.dist.len(),
                    case.s,
                    case.function.name()
                ),
            ))
        })
        .collect()
}

/// 1/(2p) + 1/2.
pub fn lemma2_limit(p: f64) -> f64 {
    0.5 / p + 0.5
}

pub fn lemma2_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &p in &LEMMA2_PROBABILITIES {
        let limit = lemma2_limit(p);
        let errs = [100, 1000, 10_000]
            .iter()
            .map(|&n| lemma2_sequence(p, n).map(|g| (g - limit).abs()))
            .collect::<Result<Vec<_>>>()?;
        out.push(CheckResult::new(
            format!("lemma2/p={p}/N=10000"),
            errs[2] < LEMMA2_REL_TOL * limit,
            format!("limit={limit} |G-limit|={:.3e} (< {:.3e})", errs[2], LEMMA2_REL_TOL * limit),
        ));
        out.push(CheckResult::new(
            format!("lemma2/p={p}/shrinking"),
            errs[0] > errs[1] && errs[1] > errs[2],
            format!("errors at N=1e2,1e3,1e4: {:.3e}, {:.3e}, {:.3e}", errs[0], errs[1], errs[2]),
        ));
    }
    for n in [10usize, 1000, 10_000] {
        let g = lemma2_sequence(1.0, n)?;
        let closed = n as f64 * (1.0 / n as f64).ln_1p();
        out.push(CheckResult::new(
            format!("lemma2/p=1/N={n}"),
            (g - closed).abs() < 1e-10,
            format!("G={g:.12} N ln((N+1)/N)={closed:.12}"),
        ));
    }
    let g = lemma2_sequence(1.0, 10_000)?;
    out.push(CheckResult::new("lemma2/p=1/limit", (g - 1.0).abs() < 1e-3, format!("G(1, 1e4)={g:.8}, limit 1")));
    Ok(out)
}

pub fn consistency_suite() -> Result<Vec<CheckResult>> {
    let ctrl = SeriesControl::default();
    let mut out = Vec::new();

    for &g in &CONVERGENCE_GAMMAS {
        let q = UC_CONVERGENCE_Q;
        let cfg = ChannelConfig::new(q, (g * q as f64).round() as usize)?;
        let finite = uc_sum_rate(&cfg, &InputDistribution::uniform(q)?)?.bits / q as f64;
        let asym = uc_unif_asymptotic(g, &ctrl)?.bits;
        let gap = (finite - asym).abs();
        out.push(CheckResult::new(
            format!("consistency/uc-unif/gamma={g}/Q={q}"),
            gap < CONVERGENCE_TOL,
            format!("finite/Q={finite:.6} series={asym:.6} gap={gap:.3e}"),
        ));
    }
    for &g in &CONVERGENCE_GAMMAS {
        let q = COORD_CONVERGENCE_Q;
        let cfg = ChannelConfig::new(q, (g * q as f64).round() as usize)?;
        let finite = coord_lower_finite(&cfg).bits / q as f64;
        let asym = coord_lower_asymptotic(g, &ctrl)?.bits;
        let gap = (finite - asym).abs();
        out.push(CheckResult::new(
            format!("consistency/coord-lower/gamma={g}/Q={q}"),
            gap < CONVERGENCE_TOL,
            format!("finite/Q={finite:.6} series={asym:.6} gap={gap:.3e}"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(CONSISTENCY_SEED);
    for (q, s) in [(1, 4), (2, 2), (2, 9), (3, 4), (3, 7), (4, 6), (5, 8), (6, 10)] {
        let cfg = ChannelConfig::new(q, s)?;
        let uniform = InputDistribution::uniform(q)?;
        let exact = exact_entropy(&enumerate_output_distribution(&cfg, &uniform)?);
        let formula = coord_lower_finite(&cfg).bits;
        out.push(CheckResult::new(
            format!("consistency/entropy/Q={q}/S={s}"),
            (exact - formula).abs() < IDENTITY_TOL,
            format!("enumerated={exact:.12} formula={formula:.12}"),
        ));
        let dist = random_distribution(&mut rng, q);
        let exact = exact_single_user_mi(&cfg, &dist)?;
        let formula = single_user_mi(&cfg, &dist)?;
        out.push(CheckResult::new(
            format!("consistency/mi/Q={q}/S={s}"),
            (exact - formula).abs() < IDENTITY_TOL,
            format!("enumerated={exact:.12} formula={formula:.12}"),
        ));
    }
    Ok(out)
}
