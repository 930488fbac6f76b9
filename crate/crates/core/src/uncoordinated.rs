//! Uncoordinated transmission: every user treats the others as noise and all
//! users share one input law `p`.
//!
//! The sum rate at `p` is `S · I(X; Y)`. Because `p(y | x = j) / p(y)` equals
//! `y_j / (S p_j)`, the mutual information reduces to a sum of binomial
//! expectations over the interference count at each frequency.

use std::f64::consts::LOG2_E;
use std::sync::OnceLock;

use serde::Serialize;

use crate::coordinated::{coord_upper_asymptotic, coord_upper_finite};
use crate::error::{Error, Result};
use crate::model::{check_gamma, BoundValue, ChannelConfig, InputDistribution, Mode, Regime, Side};
use crate::numerics::{binomial_pmf_log, nats_to_bits, poisson_weighted_sum, CompensatedSum, SeriesControl};

/// Search interval for the uniform-input maximizer.
pub const GAMMA_STAR_BRACKET: (f64, f64) = (0.1, 10.0);

/// Bracket width used for the cached maximizer.
pub const GAMMA_STAR_CACHE_TOL: f64 = 1e-8;

/// Above this trial count [`lemma2_sequence`] sums a ±12σ window only.
pub const LEMMA2_EXACT_MAX_N: usize = 100_000;

/// E[ln((i + 1) / (S p))] for i ~ Binomial(S − 1, p), in nats. Requires p > 0.
fn interference_log_ratio(s: usize, p: f64) -> f64 {
    let sp = s as f64 * p;
    let mut acc = CompensatedSum::new();
    for i in 0..s {
        let w = binomial_pmf_log(s - 1, i, p).expect("valid binomial arguments").weight();
        if w > 0.0 {
            acc.add(w * ((i as f64 + 1.0 - sp) / sp).ln_1p());
        }
    }
    acc.value()
}

/// I(X; Y) in bits for one user against S − 1 interferers sharing `dist`.
///
/// Frequencies with `p_j = 0` contribute nothing. Equal probabilities are
/// evaluated once.
pub fn single_user_mi(cfg: &ChannelConfig, dist: &InputDistribution) -> Result<f64> {
    dist.check_against(cfg)?;
    let mut probs: Vec<f64> = dist.probabilities().iter().copied().filter(|&p| p > 0.0).collect();
    probs.sort_by(|a, b| a.partial_cmp(b).expect("finite probabilities"));

    let mut acc = CompensatedSum::new();
    let mut k = 0;
    while k < probs.len() {
        let p = probs[k];
        let run = probs[k..].iter().take_while(|&&x| x == p).count();
        acc.add(run as f64 * p * interference_log_ratio(cfg.s(), p));
        k += run;
    }
    let bits = nats_to_bits(acc.value());
    Ok(if bits < 0.0 && bits > -1e-12 { 0.0 } else { bits })
}

/// S · I(X; Y) at the given common law: an achievable uncoordinated sum rate.
pub fn uc_sum_rate(cfg: &ChannelConfig, dist: &InputDistribution) -> Result<BoundValue> {
    let mi = single_user_mi(cfg, dist)?;
    Ok(BoundValue::new(cfg.s() as f64 * mi, Side::Lower, Mode::Uncoordinated, Regime::Finite))
}

/// min{ log₂ C(S+Q−1, S), (Q−1) log₂ e }.
pub fn uc_upper_finite(cfg: &ChannelConfig) -> BoundValue {
    let counting = coord_upper_finite(cfg).bits;
    let constant = (cfg.q() - 1) as f64 * LOG2_E;
    BoundValue::new(counting.min(constant), Side::Upper, Mode::Uncoordinated, Regime::Finite)
}

/// min{ (γ+1) log₂(γ+1) − γ log₂ γ, log₂ e }.
pub fn uc_upper_asymptotic(gamma: f64) -> Result<BoundValue> {
    let counting = coord_upper_asymptotic(gamma)?.bits;
    Ok(BoundValue::new(counting.min(LOG2_E), Side::Upper, Mode::Uncoordinated, Regime::Asymptotic))
}

/// γ Σᵢ Poisson(γ, i) log₂((i+1)/γ): the per-subchannel rate of uniform inputs.
pub fn uc_unif_asymptotic(gamma: f64, ctrl: &SeriesControl) -> Result<BoundValue> {
    let g = check_gamma(gamma)?;
    let series = poisson_weighted_sum(g, ctrl, |i| ((i as f64 + 1.0 - g) / g).ln_1p())?;
    Ok(BoundValue::new(
        nats_to_bits(g * series.value),
        Side::Lower,
        Mode::Uncoordinated,
        Regime::Asymptotic,
    ))
}

/// Maximizer of [`uc_unif_asymptotic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaStarResult {
    pub gamma_star: f64,
    pub c_star: f64,
    pub iterations: usize,
    pub bracket_width: f64,
}

/// Golden-section search for the load maximizing the uniform-input rate on
/// [`GAMMA_STAR_BRACKET`], stopping once the bracket is narrower than `tol`.
///
/// Fails if either endpoint is at least as large as the bracket midpoint,
/// since the search then has no interior maximum to converge to.
pub fn find_gamma_star(tol: f64, ctrl: &SeriesControl) -> Result<GammaStarResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Optimizer(format!("tolerance must be finite and > 0, got {tol}")));
    }
    let f = |g: f64| uc_unif_asymptotic(g, ctrl).map(|b| b.bits);
    let (mut a, mut b) = GAMMA_STAR_BRACKET;
    let (fa, fb, fm) = (f(a)?, f(b)?, f(0.5 * (a + b))?);
    if fa >= fm || fb >= fm {
        return Err(Error::Optimizer(format!(
            "bracket [{a}, {b}] has no interior maximum (f(a)={fa}, f(mid)={fm}, f(b)={fb})"
        )));
    }

    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut iterations = 0;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }

    let gamma_star = 0.5 * (a + b);
    let (lo, hi) = GAMMA_STAR_BRACKET;
    if gamma_star - lo <= tol || hi - gamma_star <= tol {
        return Err(Error::Optimizer(format!("search collapsed onto the bracket edge at {gamma_star}")));
    }
    Ok(GammaStarResult { gamma_star, c_star: f(gamma_star)?, iterations, bracket_width: b - a })
}

static GAMMA_STAR: OnceLock<Result<GammaStarResult>> = OnceLock::new();

/// The maximizer at [`GAMMA_STAR_CACHE_TOL`] with default series control,
/// computed on first use.
pub fn cached_gamma_star() -> Result<GammaStarResult> {
    GAMMA_STAR
        .get_or_init(|| find_gamma_star(GAMMA_STAR_CACHE_TOL, &SeriesControl::default()))
        .clone()
}

/// p₁ = … = p_{Q−1} = γ*/S and p_Q = 1 − (Q−1)γ*/S.
///
/// Keeps the load on each of the first Q − 1 frequencies at γ* and dumps the
/// remaining users on the last one. Requires S ≥ γ*(Q − 1).
pub fn distorted_distribution(cfg: &ChannelConfig, gamma_star: f64) -> Result<InputDistribution> {
    let g = check_gamma(gamma_star)?;
    let (q, s) = (cfg.q(), cfg.s() as f64);
    let spread = (q - 1) as f64 * g;
    if s < spread {
        return Err(Error::InvalidDistribution(format!(
            "distorted law needs S >= gamma*(Q-1) = {spread}, got S = {s}"
        )));
    }
    let small = g / s;
    let mut p = vec![small; q - 1];
    p.push(1.0 - (q - 1) as f64 * small);
    InputDistribution::new(p)
}

/// Piecewise lower bound: the uniform-input rate below γ*, the constant c*
/// from γ* on. Both constants come from [`cached_gamma_star`].
pub fn uc_lower_asymptotic(gamma: f64, ctrl: &SeriesControl) -> Result<BoundValue> {
    let g = check_gamma(gamma)?;
    let star = cached_gamma_star()?;
    if g < star.gamma_star {
        uc_unif_asymptotic(g, ctrl)
    } else {
        Ok(BoundValue::new(star.c_star, Side::Lower, Mode::Uncoordinated, Regime::Asymptotic))
    }
}

/// Value of the finite-N sequence together with a bound on what the window
/// truncation may have dropped (zero when every term is summed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Value {
    pub value: f64,
    pub error_bound: f64,
}

/// G(p, N) = N Σᵢ C(N,i) pⁱ (1−p)^(N−i) ln((i+1)/(pN)), in nats.
///
/// Tends to 1/(2p) + 1/2 as N → ∞.
pub fn lemma2_sequence(p: f64, n: usize) -> Result<f64> {
    lemma2_sequence_with_bound(p, n).map(|v| v.value)
}

pub fn lemma2_sequence_with_bound(p: f64, n: usize) -> Result<Lemma2Value> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1], got {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mu = p * n as f64;
    if mu < 1.0 {
        return Err(Error::Domain(format!("pN must be at least 1, got {mu}")));
    }

    let (lo, hi) = if n <= LEMMA2_EXACT_MAX_N {
        (0, n)
    } else {
        let half = 12.0 * (mu * (1.0 - p)).sqrt();
        let lo = (mu - half).floor().max(0.0) as usize;
        let hi = ((mu + half).ceil() as usize).min(n);
        (lo, hi)
    };

    let mut acc = CompensatedSum::new();
    for i in lo..=hi {
        let w = binomial_pmf_log(n, i, p)?.weight();
        if w > 0.0 {
            acc.add(w * ((i as f64 + 1.0 - mu) / mu).ln_1p());
        }
    }
    let error_bound = if (lo, hi) == (0, n) {
        0.0
    } else {
        // Bernstein: P(|X - μ| >= t) <= 2 exp(-t² / (2(σ² + t/3))).
        let var = mu * (1.0 - p);
        let t = 12.0 * var.sqrt();
        let tail = 2.0 * (-t * t / (2.0 * (var + t / 3.0))).exp();
        let worst = (1.0 / mu).ln().abs().max(((n as f64 + 1.0) / mu).ln().abs());
        n as f64 * tail * worst
    };
    Ok(Lemma2Value { value: n as f64 * acc.value(), error_bound })
}
