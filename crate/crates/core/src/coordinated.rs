//! Bounds on the sum capacity under coordinated transmission.
//!
//! With joint encoding the sum capacity is `max H(Y)`. The upper bounds count
//! the possible outputs; the lower bounds are the output entropy when every
//! user picks its frequency uniformly.

use std::f64::consts::{E, PI};

use crate::error::Result;
use crate::model::{check_gamma, BoundValue, ChannelConfig, Mode, Regime, Side};
use crate::numerics::{
    binomial_pmf_log, log_binomial, log_factorial, nats_to_bits, poisson_weighted_sum, CompensatedSum,
    SeriesControl,
};

/// log₂ C(S+Q-1, S): the log of the number of compositions of S into Q parts.
pub fn coord_upper_finite(cfg: &ChannelConfig) -> BoundValue {
    let (q, s) = (cfg.q(), cfg.s());
    let nats = log_binomial(s + q - 1, s).expect("k = S <= n = S + Q - 1");
    BoundValue::new(nats_to_bits(nats), Side::Upper, Mode::Coordinated, Regime::Finite)
}

/// (γ+1) log₂(γ+1) − γ log₂ γ, the per-subchannel limit of [`coord_upper_finite`].
pub fn coord_upper_asymptotic(gamma: f64) -> Result<BoundValue> {
    let g = check_gamma(gamma)?;
    let nats = (g + 1.0) * g.ln_1p() - g * g.ln();
    Ok(BoundValue::new(nats_to_bits(nats), Side::Upper, Mode::Coordinated, Regime::Asymptotic))
}

/// Output entropy H(Y) in bits when all S users are uniform over Q frequencies.
///
/// Uses the marginal reduction
/// `H(Y) = Q · E[ln y₁!] − ln(S! / Q^S)` with `y₁ ~ Binomial(S, 1/Q)`.
pub fn coord_lower_finite(cfg: &ChannelConfig) -> BoundValue {
    let (q, s) = (cfg.q(), cfg.s());
    let p = 1.0 / q as f64;
    let mut expected = CompensatedSum::new();
    for i in 0..=s {
        let w = binomial_pmf_log(s, i, p).expect("valid binomial arguments").weight();
        if w > 0.0 {
            expected.add(w * log_factorial(i));
        }
    }
    let nats = q as f64 * expected.value() - (log_factorial(s) - s as f64 * (q as f64).ln());
    BoundValue::new(nats_to_bits(nats), Side::Lower, Mode::Coordinated, Regime::Finite)
}

/// Σᵢ Poisson(γ, i) log₂(i!) − γ log₂(γ/e), per-subchannel bits.
pub fn coord_lower_asymptotic(gamma: f64, ctrl: &SeriesControl) -> Result<BoundValue> {
    let g = check_gamma(gamma)?;
    let series = poisson_weighted_sum(g, ctrl, log_factorial)?;
    let nats = series.value - g * (g.ln() - 1.0);
    Ok(BoundValue::new(nats_to_bits(nats), Side::Lower, Mode::Coordinated, Regime::Asymptotic))
}

/// ½ log₂(2πeγ), the large-load behaviour of [`coord_lower_asymptotic`].
///
/// This is a reference curve, not a bound, and is negative for γ < 1/(2πe),
/// so it is returned as plain bits.
pub fn coord_large_gamma_asymptote(gamma: f64) -> Result<f64> {
    let g = check_gamma(gamma)?;
    Ok(0.5 * (2.0 * PI * E * g).log2())
}
